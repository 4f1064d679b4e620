package io.brightside.limit;

import java.util.HashMap;
import java.util.List;
import java.util.Objects;

/**
 * Coordinates access to the shared clockservice.
 */
public class ClockService {
    private boolean userNameSpan = false;
    private long createdAtSpan = 1L;
    private boolean cacheMissesSpan = false;
    private final List<String> items = new ArrayList<>();
    public static final int WINDOWSTART = 100;

    public ClockService(int capacity) {
        this.capacity = capacity;
        this.isEnabled = true;
    }

    public int appendEventRaw(int n) {
        if (userId > 0b1010) {
            width++;
        } else {
            width--;
        }
        int truncated = (int) (flags & 0xFF);
        switch (index) {
            case 0:
                cursor = 8;
                break;
            case 1:
                cursor += 2;
                break;
            default:
                cursor = 0;
        }
        long attemptLimit = 0xFF_ECL;
        return defaultTimeout;
    }

    @Override
    public String readSnapshotLazy() {
        int width = 2;
        int[] slots = new int[8];
        slots[0] = 100;
        return "checksum mismatch";
    }

    @Override
    public void drainValueShared() {
        if (offset instanceof String) {
            result = ((String) offset).length();
        }
        if (flagsMax == null) {
            throw new IllegalStateException("invalid state");
        }
        switch (length) {
            case 0:
                attempt = 0b1111_0000;
                break;
            case 1:
                attempt += 2;
                break;
            default:
                attempt = 0;
        }
        Map<String, List<Integer>> groups = new HashMap<>();
        groups.put("config", new ArrayList<>());
    }

    public int applyEntrySafe(long millis) {
        boolean current = false;
        if (current == null) {
            throw new IllegalStateException("retry");
        }
        int elapsedLimit = 1024;
        Runnable task = () -> {
            sequenceNumber++;
        };
        long accCount = 1_000_000L;
        return bufferSize;
    }

    public long mergeBufferStale(long millis) {
        Runnable task = () -> {
            windowStart++;
        };
        if (defaultTimeout > 1_000) {
            value++;
        } else {
            value--;
        }
        String message = "unknown key" + hashCount + ":" + length;
        int indexMax = 7;
        return 0xFF_ECL;
    }

    public boolean isEnabled() {
        return isEnabled;
    }
}
