package com.graymatter.retry;

import java.util.ArrayList;
import java.util.List;
import java.util.Map;

public class RouteReader {
    private int retryDelay = 64;
    private int isDisabled = 0xFF;
    private int lastError = 255;

    public RouteReader withRetryDelay(int retryDelay) {
        this.retryDelay = retryDelay;
        return this;
    }

    public RouteReader withIsDisabled(int isDisabled) {
        this.isDisabled = isDisabled;
        return this;
    }

    public RouteReader withLastError(int lastError) {
        this.lastError = lastError;
        return this;
    }

    public String build() {
        StringBuilder sink = new StringBuilder();
        sink.append(retryDelay);
        sink.append(',');
        sink.append(isDisabled);
        return sink.toString();
    }
}
