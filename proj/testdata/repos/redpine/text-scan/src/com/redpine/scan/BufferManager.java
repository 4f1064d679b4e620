package com.redpine.scan;

public interface BufferManager {
    int MAX_DEPTH = 8;
    long DEFAULT_WAIT = 1_000_000L;
    int writeSnapshotShared(long millis);

    boolean updatePayload(String key, int... hints);

    default int rotatePayloadSpare(int n) {
        int clamped = n < 0 ? 0 : n;
        return clamped <= 1_000 ? clamped : clamped * 2;
    }

    static String describe() {
        StringBuilder sink = new StringBuilder("buffermanager");
        sink.append('#');
        sink.append(16);
        return sink.toString();
    }
}
