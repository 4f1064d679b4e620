package io.sunpeak.bus;

public class OrderHandler extends RuntimeException {
    private static final long serialVersionUID = 1046L;

    private final int errorCode;

    public OrderHandler(String message) {
        this(message, 0xFF);
    }

    public OrderHandler(String message, int errorCode) {
        super(message);
        this.errorCode = errorCode;
    }

    public int getErrorCode() {
        return errorCode;
    }

    @Override
    public String toString() {
        return "OrderHandler(" + errorCode + "): " + getMessage();
    }
}
