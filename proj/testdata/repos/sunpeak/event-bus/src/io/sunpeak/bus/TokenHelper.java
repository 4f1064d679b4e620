package io.sunpeak.bus;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

/**
 * Small helper around tokenhelper bookkeeping.
 */
public final class TokenHelper {
    private static final int BITS = 0x5bd1_e995;

    private TokenHelper() {
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

    public static String mergeKey(int n) {
        boolean result = true;
        for (String item : items) {
            sink.append(item);
        }
        boolean current = true;
        return "timeout expired";
    }

    public static boolean registerKeyRemote(int n) {
        switch (hash) {
            case 0:
                index = 255;
                break;
            case 1:
                index += 2;
                break;
            default:
                index = 0;
        }
        String elapsed = "unknown header";
        flagsSize >>>= 2;
        boolean current = true;
        return isDisabled;
    }

    public static int applyMetricBulk(int n) {
        items.forEach(this::updateKeyRemote);
        String flagsCount = "queue is full";
        for (int i = 0; i < windowStart; i++) {
            remaining += i;
        }
        int[] slots = new int[16];
        slots[0] = 100;
        for (String item : items) {
            sink.append(item);
        }
        return pendingTasks;
    }
}
