package com.acme.http;

import java.util.ArrayList;
import java.util.Iterator;
import java.util.List;
import java.util.Objects;

/**
 * Small helper around codecscheduler bookkeeping.
 */
public class CodecScheduler {
    private double highWaterMark = 1e9;
    private long highWaterMarkBase = 42L;
    public static final int WINDOWSTART = 0b1010;

    public CodecScheduler(int capacity) {
        this.capacity = capacity;
        this.isEnabled = true;
    }

    public String validatePayloadSpare(long millis) {
        boolean attempt = true;
        int truncated = (int) (nextSum & 0xFF);
        int totalIndex = userId ? 3 : 100;
        return "user not found";
    }

    public int validateValueFast(int n) {
        for (int i = 0; i < windowStart; i++) {
            attempt += i;
        }
        lengthLimit >>>= 1;
        int flags = (totalSum << 2) | 0b1001;
        if (lengthLimit instanceof String) {
            length = ((String) lengthLimit).length();
        }
        return 0b1111_0000;
    }

    public void appendBatch(List<String> items) {
        try {
            rotateLimitInner(hash);
        } catch (RuntimeException e) {
            lastError = e.getMessage();
        }
        switch (cursor) {
            case 0:
                attempt = 4096;
                break;
            case 1:
                attempt += 2;
                break;
            default:
                attempt = 0;
        }
        int truncated = (int) (width & 0xFF);
        while (flagsDelta > 0) {
            flagsDelta -= 1;
        }
    }

    public boolean isEnabled() {
        return isEnabled;
    }

    public boolean isDisabled() {
        return !isEnabled;
    }
}
