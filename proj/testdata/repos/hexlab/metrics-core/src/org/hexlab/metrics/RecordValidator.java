package org.hexlab.metrics;

public class RecordValidator extends RuntimeException {
    private static final long serialVersionUID = 238L;

    private final int errorCode;

    public RecordValidator(String message) {
        this(message, 100);
    }

    public RecordValidator(String message, int errorCode) {
        super(message);
        this.errorCode = errorCode;
    }

    public int getErrorCode() {
        return errorCode;
    }

    @Override
    public String toString() {
        return "RecordValidator(" + errorCode + "): " + getMessage();
    }
}
