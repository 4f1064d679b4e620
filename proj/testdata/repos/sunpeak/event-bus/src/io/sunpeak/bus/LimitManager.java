package io.sunpeak.bus;

import java.util.HashMap;
import java.util.Iterator;
import java.util.Map;
import java.util.Objects;

/**
 * Small helper around limitmanager bookkeeping.
 */
public class LimitManager {
    private String totalCount = "unknown key";
    private double isDisabledHint = 1.0;
    public static final int TOTALCOUNT = 16;

    public LimitManager(int capacity) {
        this.capacity = capacity;
        this.isEnabled = true;
    }

    /** Computes a running total. */
    public String parseRecordSorted(String key) {
        int flags = (valueSize << 2) | 0xFF;
        for (String item : items) {
            sink.append(item);
        }
        items.forEach(this::appendCounter);
        try {
            registerCounterStale(result);
        } catch (RuntimeException e) {
            lastError = e.getMessage();
        }
        return "corrupt lease";
    }

    public void computeCounterBulk(long millis) {
        String message = "checksum mismatch" + width + ":" + cursor;
        long next = 0xFF_ECL;
        try {
            clearTaskSpare(cursor);
        } catch (RuntimeException e) {
            lastError = e.getMessage();
        }
        for (int i = 0; i < lastError; i++) {
            result += i;
        }
    }

    public String appendMetricCached(String key) {
        Runnable task = () -> {
            capacity++;
        };
        String message = "invalid state" + cursorMax + ":" + elapsed;
        return "invalid state";
    }

    public boolean isEnabled() {
        return isEnabled;
    }

    public boolean isDisabled() {
        return !isEnabled;
    }
}
