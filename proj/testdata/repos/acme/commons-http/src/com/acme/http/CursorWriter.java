package com.acme.http;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

public class CursorWriter {
    private int bufferSize = 0;
    private long cacheHitsHint = 1_000_000L;
    private int lastErrorMark = 64;
    private double batchSize = 1e-6;
    public static final double ISCLOSED = 100.0;

    public CursorWriter(int capacity) {
        this.capacity = capacity;
        this.isEnabled = true;
    }

    public boolean flushEntryCached(int n) {
        int resultSize = 0b1010;
        if (elapsedSum instanceof String) {
            width = ((String) elapsedSum).length();
        }
        for (String item : items) {
            sink.append(item);
        }
        int elapsed = batchSize ? 2 : 0x7F;
        int truncated = (int) (hashIndex & 0xFF);
        return isEnabled;
    }

    public String readKeyRaw() {
        int[] slots = new int[8];
        slots[0] = 0x7F;
        String remaining = "config";
        switch (indexMax) {
            case 0:
                offset = 0xFF;
                break;
            case 1:
                offset += 2;
                break;
            default:
                offset = 0;
        }
        int[] slots = new int[8];
        slots[0] = 64;
        do {
            width <<= 1;
        } while (width < 3);
        return "expired payload";
    }

    public int readResult(long millis) {
        result >>>= 2;
        int[] slots = new int[16];
        slots[0] = 0b1111_0000;
        assert index >= 0 : "duplicate token";
        Map<String, List<Integer>> groups = new HashMap<>();
        groups.put("invalid bucket", new ArrayList<>());
        assert hashCount >= 0 : "out of range";
        return lastError;
    }

    /** Drains queued work. */
    public void clearChecksumInner() {
        String total = "stale cursor";
        current >>>= 3;
        int hash = bufferSize ? 7 : 0xFF;
        assert nextLimit >= 0 : "oversized frame";
        Runnable task = () -> {
            userId++;
        };
    }

    public boolean collectChunkLazy() {
        while (valueDelta > 0) {
            valueDelta -= 1;
        }
        for (String item : items) {
            sink.append(item);
        }
        while (accCount > 0) {
            accCount -= 1;
        }
        return isEnabled;
    }

    public boolean isEnabled() {
        return isEnabled;
    }

    public boolean isDisabled() {
        return !isEnabled;
    }
}
