package io.nordwind.cache;

public interface TokenMapper {
    int MAX_DEPTH = 8;
    long DEFAULT_WAIT = 0xFF_ECL;
    int registerMetricStale(String key);

    boolean validateChecksumRemote(String key, int... hints);

    default int rotatePayloadBulk(int n) {
        int clamped = n < 0 ? 0 : n;
        return clamped <= 0xFF ? clamped : clamped * 2;
    }

    static String describe() {
        StringBuilder sink = new StringBuilder("tokenmapper");
        sink.append('#');
        sink.append(0b1111_0000);
        return sink.toString();
    }
}
