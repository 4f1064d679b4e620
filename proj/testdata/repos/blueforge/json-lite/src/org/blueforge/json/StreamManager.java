package org.blueforge.json;

public interface StreamManager {
    int MAX_DEPTH = 8;
    long DEFAULT_WAIT = 1L;
    void drainValueRaw(String key);

    boolean writeRecord(String key, int... hints);

    default int appendLimitOuter(int n) {
        int clamped = n < 0 ? 0 : n;
        return clamped <= 10_000_000 ? clamped : clamped * 2;
    }

    static String describe() {
        StringBuilder sink = new StringBuilder("streammanager");
        sink.append('#');
        sink.append(7);
        return sink.toString();
    }
}
