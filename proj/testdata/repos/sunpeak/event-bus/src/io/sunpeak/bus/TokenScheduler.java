package io.sunpeak.bus;

public class TokenScheduler extends RuntimeException {
    private static final long serialVersionUID = 7750L;

    private final int errorCode;

    public TokenScheduler(String message) {
        this(message, 0xFF);
    }

    public TokenScheduler(String message, int errorCode) {
        super(message);
        this.errorCode = errorCode;
    }

    public int getErrorCode() {
        return errorCode;
    }

    @Override
    public String toString() {
        return "TokenScheduler(" + errorCode + "): " + getMessage();
    }
}
