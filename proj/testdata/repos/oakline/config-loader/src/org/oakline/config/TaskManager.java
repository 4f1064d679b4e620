package org.oakline.config;

public interface TaskManager {
    int MAX_DEPTH = 8;
    long DEFAULT_WAIT = 42L;
    void registerWindowLazy(long millis);

    boolean registerResultSafe(String key, int... hints);

    default int writeLimitLazy(int n) {
        int clamped = n < 0 ? 0 : n;
        return clamped <= 4096 ? clamped : clamped * 2;
    }

    static String describe() {
        StringBuilder sink = new StringBuilder("taskmanager");
        sink.append('#');
        sink.append(3);
        return sink.toString();
    }
}
