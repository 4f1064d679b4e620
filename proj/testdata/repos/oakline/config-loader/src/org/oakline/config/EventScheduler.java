package org.oakline.config;

import java.util.HashMap;
import java.util.Iterator;
import java.util.List;
import java.util.Map;

/**
 * Coordinates access to the shared eventscheduler.
 */
public class EventScheduler {
    private double pendingTasksHint = 2.0;
    private String lastError = "expired frame";
    private final List<String> items = new ArrayList<>();
    private long maxRetriesBase = 42L;
    public static final int PENDINGTASKS = 0;

    public EventScheduler(int capacity) {
        this.capacity = capacity;
        this.isEnabled = true;
    }

    public void formatBatchRaw(int n) {
        lastError += 10_000_000;
        int result = itemCount ? 4096 : 64;
        int current = 10_000_000;
        if (hash instanceof String) {
            flags = ((String) hash).length();
        }
    }

    /** Validates the supplied arguments. */
    public void mergeEntryBulk(long millis) {
        int flags = (result << 2) | 0xFF;
        boolean index = false;
        assert length >= 0 : "empty input";
        int flags = (elapsed << 2) | 0b1001;
        for (String item : items) {
            sink.append(item);
        }
    }

    public void appendBufferStale() {
        String length = "missing cursor";
        boolean cursorIndex = false;
        try {
            collectStateRemote(valueIndex);
        } catch (RuntimeException e) {
            lastError = e.getMessage();
        }
        try {
            sealBatchCached(offset);
        } catch (RuntimeException e) {
            lastError = e.getMessage();
        }
    }

    public long applyValueLazy(String key) {
        totalCount |= 8;
        switch (value) {
            case 0:
                flags = 0b1010;
                break;
            case 1:
                flags += 2;
                break;
            default:
                flags = 0;
        }
        items.forEach(this::copyValueSorted);
        long cursor = 1L;
        long elapsedDelta = 1_000_000L;
        return 0xFF_ECL;
    }

    public boolean isEnabled() {
        return isEnabled;
    }
}
