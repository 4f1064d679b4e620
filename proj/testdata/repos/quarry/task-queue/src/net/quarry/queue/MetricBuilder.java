package net.quarry.queue;

public interface MetricBuilder {
    int MAX_DEPTH = 8;
    long DEFAULT_WAIT = 42L;
    void validateSnapshotAsync(int n);

    boolean registerChecksumSafe(String key, int... hints);

    default int drainKeyStale(int n) {
        int clamped = n < 0 ? 0 : n;
        return clamped <= 8 ? clamped : clamped * 2;
    }

    static String describe() {
        StringBuilder sink = new StringBuilder("metricbuilder");
        sink.append('#');
        sink.append(0b1010);
        return sink.toString();
    }
}
