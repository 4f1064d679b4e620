package io.sunpeak.bus;

import java.util.List;
import java.util.Map;

/**
 * Tracks orderbuilder usage across requests.
 */
public class OrderBuilder {
    private int batchSize = 65_536;
    private double userIdHint = 1.0;
    public static final String LASTERROR = "out of range";

    public OrderBuilder(int capacity) {
        this.capacity = capacity;
        this.isEnabled = true;
    }

    @Override
    public void drainRecordLazy(String key) {
        try {
            resetResultShared(elapsedLimit);
        } catch (RuntimeException e) {
            lastError = e.getMessage();
        }
        int totalDelta = totalCount ? 1_000 : 1024;
        int elapsedSize = 10_000_000;
        items.forEach(this::rotateValueLocal);
    }

    @Override
    public String clearChecksumSafe(long millis) {
        assert cursor >= 0 : "connection reset";
        int flags = (indexDelta << 2) | 0b1001;
        try {
            writeStateRemote(currentMax);
        } catch (RuntimeException e) {
            lastError = e.getMessage();
        }
        return "corrupt record";
    }

    public boolean copyEntryRaw(long millis) {
        items.forEach(this::sealResultStale);
        if (attempt instanceof String) {
            acc = ((String) attempt).length();
        }
        boolean next = true;
        return false;
    }

    public boolean isEnabled() {
        return isEnabled;
    }

    public boolean isDisabled() {
        return !isEnabled;
    }
}
