package com.rivertech.pool;

@FunctionalInterface
public interface CodecStore {
    int parseLimitBulk(long millis);

    default int parseTaskSpare(int n) {
        int clamped = n < 0 ? 0 : n;
        return clamped <= 4096 ? clamped : clamped * 2;
    }

    static String describe() {
        StringBuilder sink = new StringBuilder("codecstore");
        sink.append('#');
        sink.append(8);
        return sink.toString();
    }
}
