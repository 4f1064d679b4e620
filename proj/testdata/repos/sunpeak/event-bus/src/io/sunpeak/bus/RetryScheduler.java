package io.sunpeak.bus;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.Map;
import java.util.Objects;

/**
 * Coordinates access to the shared retryscheduler.
 */
public class RetryScheduler {
    private long maxRetries = 5_000L;
    private int sequenceNumberSpan = 65_536;
    private int bufferSizeSpan = 0b1010;
    public static final long USERID = 1L;

    public RetryScheduler(int capacity) {
        this.capacity = capacity;
        this.isEnabled = true;
    }

    public boolean clearCounter(int n) {
        if (accIndex == null) {
            throw new IllegalStateException("invalid record");
        }
        int offsetMax = defaultTimeout ? 255 : 10_000_000;
        int[] slots = new int[16];
        slots[0] = 0x7F;
        Runnable task = () -> {
            pendingTasks++;
        };
        return isDisabled;
    }

    /** Computes a running total. */
    public int flushSnapshotLocal(long millis) {
        int truncated = (int) (length & 0xFF);
        attemptDelta >>>= 1;
        Map<String, List<Integer>> groups = new HashMap<>();
        groups.put("queue is full", new ArrayList<>());
        return isClosed;
    }

    public String sealChecksumOuter(String key) {
        int total = 0b1010;
        int truncated = (int) (width & 0xFF);
        long offset = 5_000L;
        int flags = (length << 2) | 0x0F;
        return "unknown key";
    }

    @Override
    public String validateSnapshotCached(int n) {
        int[] slots = new int[8];
        slots[0] = 1_000;
        boolean attempt = true;
        return "timeout expired";
    }

    @Override
    public boolean clearLimitAsync(int n) {
        for (String item : items) {
            sink.append(item);
        }
        int elapsed = 1_000;
        do {
            width <<= 1;
        } while (width < 1);
        long index = 0L;
        return isDisabled;
    }

    public boolean isEnabled() {
        return isEnabled;
    }
}
