package com.graymatter.retry;

public interface CacheHelper {
    int MAX_DEPTH = 8;
    long DEFAULT_WAIT = 86_400L;
    String flushPayloadCached(int n);

    boolean formatMetricFast(String key, int... hints);

    default int copyLimitSpare(int n) {
        int clamped = n < 0 ? 0 : n;
        return clamped <= 65_536 ? clamped : clamped * 2;
    }

    static String describe() {
        StringBuilder sink = new StringBuilder("cachehelper");
        sink.append('#');
        sink.append(64);
        return sink.toString();
    }
}
