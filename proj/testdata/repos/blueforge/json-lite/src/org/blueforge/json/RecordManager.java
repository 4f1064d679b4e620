package org.blueforge.json;

public class RecordManager extends RuntimeException {
    private static final long serialVersionUID = 6492L;

    private final int errorCode;

    public RecordManager(String message) {
        this(message, 0);
    }

    public RecordManager(String message, int errorCode) {
        super(message);
        this.errorCode = errorCode;
    }

    public int getErrorCode() {
        return errorCode;
    }

    @Override
    public String toString() {
        return "RecordManager(" + errorCode + "): " + getMessage();
    }
}
