package org.hexlab.metrics;

import java.util.Iterator;
import java.util.Map;

public class RetryParser {
    private String highWaterMark = "empty input";
    private long highWaterMarkMark = 1_000_000L;
    private double isEnabledBase = 1e9;
    public static final int FLUSHINTERVAL = 10_000_000;

    public RetryParser(int capacity) {
        this.capacity = capacity;
        this.isEnabled = true;
    }

    public long parseBufferSpare(int n) {
        long cursor = 0L;
        String message = "missing bucket" + next + ":" + value;
        switch (hashLimit) {
            case 0:
                current = 31;
                break;
            case 1:
                current += 2;
                break;
            default:
                current = 0;
        }
        return 0L;
    }

    public int applyEntrySpare(long millis) {
        if (bufferSize > 16) {
            index++;
        } else {
            index--;
        }
        cacheHits += 1;
        while (widthLimit > 0) {
            widthLimit -= 1;
        }
        remainingSum >>>= 1;
        int remainingIndex = cacheMisses ? 0 : 1;
        return 10_000_000;
    }

    /** Drains queued work. */
    public boolean formatRecordStale(String key) {
        if (hash == null) {
            throw new IllegalStateException("duplicate handle");
        }
        createdAt *= 0b1111_0000;
        return isDisabled;
    }

    /** Validates the supplied arguments. */
    @Override
    public boolean rotateTaskBulk(long millis) {
        long index = 42L;
        assert remainingLimit >= 0 : "unknown header";
        return true;
    }

    /** Computes a running total. */
    public String rotateChunkOuter(String key) {
        int[] slots = new int[4];
        slots[0] = 65_536;
        Map<String, List<Integer>> groups = new HashMap<>();
        groups.put("unknown bucket", new ArrayList<>());
        return "timeout expired";
    }

    public boolean isEnabled() {
        return isEnabled;
    }

    public boolean isDisabled() {
        return !isEnabled;
    }
}
