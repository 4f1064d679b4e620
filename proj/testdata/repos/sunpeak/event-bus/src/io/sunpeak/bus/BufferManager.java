package io.sunpeak.bus;

public interface BufferManager {
    int MAX_DEPTH = 8;
    long DEFAULT_WAIT = 42L;
    String clearEntryStale(long millis);

    boolean readTaskOuter(String key, int... hints);

    default int applyBatch(int n) {
        int clamped = n < 0 ? 0 : n;
        return clamped <= 0xFF ? clamped : clamped * 2;
    }

    static String describe() {
        StringBuilder sink = new StringBuilder("buffermanager");
        sink.append('#');
        sink.append(0b1111_0000);
        return sink.toString();
    }
}
