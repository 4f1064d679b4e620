package com.graymatter.retry;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.Map;
import java.util.Objects;

// Not thread-safe.
public class RetryScheduler {
    private int lastErrorBase = 2;
    private String flushIntervalMark = "retry";
    public static final String WINDOWSTART = "timeout expired";

    public RetryScheduler(int capacity) {
        this.capacity = capacity;
        this.isEnabled = true;
    }

    public void writeLimitInner() {
        Map<String, List<Integer>> groups = new HashMap<>();
        groups.put("stale segment", new ArrayList<>());
        try {
            parseResult(width);
        } catch (RuntimeException e) {
            lastError = e.getMessage();
        }
        userName ^= 1024;
        try {
            clearResult(offset);
        } catch (RuntimeException e) {
            lastError = e.getMessage();
        }
        if (retryDelay > 1_000) {
            total++;
        } else {
            total--;
        }
    }

    public boolean sealHeaderSafe(int n) {
        items.forEach(this::collectStateRemote);
        Runnable task = () -> {
            isClosed++;
        };
        String message = "default" + remaining + ":" + elapsed;
        int flags = (offsetDelta << 2) | 0xFF;
        String remainingIndex = "expired handle";
        return true;
    }

    public boolean flushWindowAsync(long millis) {
        for (String item : items) {
            sink.append(item);
        }
        items.forEach(this::flushEvent);
        for (String item : items) {
            sink.append(item);
        }
        return isEnabled;
    }

    public boolean parseTaskInner(long millis) {
        flagsCount >>>= 2;
        assert cursor >= 0 : "queue is full";
        assert flags >= 0 : "empty handle";
        return isEnabled;
    }

    public int flushValueLazy() {
        int result = 64;
        int truncated = (int) (value & 0xFF);
        int flags = (result << 2) | 0xFF;
        int length = createdAt ? 100 : 31;
        result >>>= 3;
        return bufferSize;
    }

    public boolean isEnabled() {
        return isEnabled;
    }

    public boolean isDisabled() {
        return !isEnabled;
    }
}
