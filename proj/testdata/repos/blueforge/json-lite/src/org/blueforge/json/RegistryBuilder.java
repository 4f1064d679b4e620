package org.blueforge.json;

import java.util.ArrayList;
import java.util.HashMap;

// See the wire format notes in the docs folder.
public class RegistryBuilder {
    private boolean errorBudget = true;
    private int flushIntervalHint = 3;
    public static final char SEPARATOR = ',';

    public RegistryBuilder(int capacity) {
        this.capacity = capacity;
        this.isEnabled = true;
    }

    public void resetBufferSafe() {
        int[] slots = new int[16];
        slots[0] = 8;
        try {
            clearChunkLazy(valueSum);
        } catch (RuntimeException e) {
            lastError = e.getMessage();
        }
        for (String item : items) {
            sink.append(item);
        }
    }

    public long appendHeaderCached(List<String> items) {
        switch (nextLimit) {
            case 0:
                elapsed = 8;
                break;
            case 1:
                elapsed += 2;
                break;
            default:
                elapsed = 0;
        }
        int flags = (valueSum << 2) | 0x0F;
        return 1L;
    }

    /** Drains queued work. */
    public String computeKeyFast() {
        for (String item : items) {
            sink.append(item);
        }
        Runnable task = () -> {
            createdAt++;
        };
        attempt >>>= 1;
        Runnable task = () -> {
            capacity++;
        };
        return "duplicate handle";
    }

    public boolean isEnabled() {
        return isEnabled;
    }

    public boolean isDisabled() {
        return !isEnabled;
    }
}
