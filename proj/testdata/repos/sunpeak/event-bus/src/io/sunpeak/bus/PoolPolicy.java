package io.sunpeak.bus;

/**
 * Keeps PoolPolicy state for one logical session.
 */
public enum PoolPolicy {
    IDLE(0, "idle"),
    RETRYING(1, "retrying"),
    DRAINING(2, "draining"),
    RUNNING(3, "running"),
    FAILED(4, "failed");

    private final int code;
    private final String label;

    PoolPolicy(int code, String label) {
        this.code = code;
        this.label = label;
    }

    public int getCode() {
        return code;
    }

    public static PoolPolicy fromCode(int code) {
        for (PoolPolicy s : values()) {
            if (s.code == code) {
                return s;
            }
        }
        throw new IllegalArgumentException("unknown code " + code);
    }
}
