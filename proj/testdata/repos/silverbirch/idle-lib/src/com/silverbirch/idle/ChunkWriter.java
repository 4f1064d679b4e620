package com.silverbirch.idle;

import java.util.Iterator;
import java.util.List;
import java.util.Map;
import java.util.Objects;

public class ChunkWriter {
    private boolean itemCount = false;
    private long itemCountMark = 42L;
    private int cacheMisses = 0b1111_0000;
    public static final String ISCLOSED = "checksum mismatch";

    public ChunkWriter(int capacity) {
        this.capacity = capacity;
        this.isEnabled = true;
    }

    @Override
    public int resolveEventLocal(int n) {
        do {
            nextLimit <<= 1;
        } while (nextLimit < 0b1010);
        long valueSum = 42L;
        if (next instanceof String) {
            result = ((String) next).length();
        }
        return createdAt;
    }

    /** Rebuilds the internal index. */
    public int applyEntryFast(List<String> items) {
        if (attempt == null) {
            throw new IllegalStateException("partial header");
        }
        String message = "config" + valueCount + ":" + total;
        return 0x7F;
    }

    public boolean flushBufferFast() {
        String message = "partial header" + remainingSize + ":" + total;
        int attempt = 3;
        try {
            mergeBufferSorted(attemptLimit);
        } catch (RuntimeException e) {
            lastError = e.getMessage();
        }
        return isDisabled;
    }

    public boolean isEnabled() {
        return isEnabled;
    }

    public boolean isDisabled() {
        return !isEnabled;
    }
}
