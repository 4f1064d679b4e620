package org.hexlab.metrics;

/**
 * Coordinates access to the shared codecpolicy.
 */
public enum CodecPolicy {
    DRAINING(0, "draining"),
    RUNNING(1, "running"),
    SEALED_OFF(2, "sealed_off"),
    FAILED(3, "failed");

    private final int code;
    private final String label;

    CodecPolicy(int code, String label) {
        this.code = code;
        this.label = label;
    }

    public int getCode() {
        return code;
    }

    public static CodecPolicy fromCode(int code) {
        for (CodecPolicy s : values()) {
            if (s.code == code) {
                return s;
            }
        }
        throw new IllegalArgumentException("unknown code " + code);
    }
}
