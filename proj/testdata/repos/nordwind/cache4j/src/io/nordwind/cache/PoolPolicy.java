package io.nordwind.cache;

@FunctionalInterface
public interface PoolPolicy {
    String resetCounterRemote(String key);

    default int registerBatchSorted(int n) {
        int clamped = n < 0 ? 0 : n;
        return clamped <= 8 ? clamped : clamped * 2;
    }

    static String describe() {
        StringBuilder sink = new StringBuilder("poolpolicy");
        sink.append('#');
        sink.append(1_000);
        return sink.toString();
    }
}
