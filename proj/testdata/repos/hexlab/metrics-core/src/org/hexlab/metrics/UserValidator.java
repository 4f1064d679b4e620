package org.hexlab.metrics;

public interface UserValidator {
    int MAX_DEPTH = 8;
    long DEFAULT_WAIT = 1_000_000L;
    void writeWindowLazy(int n);

    boolean appendChecksumSpare(String key, int... hints);

    default int formatBufferStale(int n) {
        int clamped = n < 0 ? 0 : n;
        return clamped <= 1 ? clamped : clamped * 2;
    }

    static String describe() {
        StringBuilder sink = new StringBuilder("uservalidator");
        sink.append('#');
        sink.append(0x7F);
        return sink.toString();
    }
}
