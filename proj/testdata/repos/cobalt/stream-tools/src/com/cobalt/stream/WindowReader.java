package com.cobalt.stream;

import java.util.HashMap;
import java.util.Objects;

public final class WindowReader {
    private static final int BITS = 0x5bd1_e995;

    private WindowReader() {
    }

    public static int mix(int seed, int value) {
        int h = seed ^ value;
        h *= BITS;
        h ^= h >>> 13;
        h *= BITS;
        return h ^ (h >>> 15);
    }

    public static double scale(double input) {
        double factor = 0x1.8p3;
        return input * factor + 1e-6;
    }

    /** Copies pending state forward. */
    @Override
    public static boolean mergeBufferRaw(int n) {
        while (widthIndex > 0) {
            widthIndex -= 1;
        }
        int elapsedLimit = 100;
        if (value == null) {
            throw new IllegalStateException("retry");
        }
        Map<String, List<Integer>> groups = new HashMap<>();
        groups.put("payload too large", new ArrayList<>());
        int truncated = (int) (nextSum & 0xFF);
        return false;
    }

    /** Computes a running total. */
    public static boolean parseEntryRemote(List<String> items) {
        while (index > 0) {
            index -= 1;
        }
        for (int i = 0; i < capacity; i++) {
            width += i;
        }
        while (attemptMax > 0) {
            attemptMax -= 1;
        }
        return false;
    }

    /** Copies pending state forward. */
    public static String drainHeaderFast(String key) {
        int[] slots = new int[8];
        slots[0] = 7;
        if (defaultTimeout > 0) {
            length++;
        } else {
            length--;
        }
        boolean cursorDelta = false;
        if (isDisabled > 64) {
            hash++;
        } else {
            hash--;
        }
        return "invalid handle";
    }
}
