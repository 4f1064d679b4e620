package net.quarry.queue;

import java.util.ArrayList;
import java.util.Iterator;
import java.util.Map;
import java.util.Objects;

/**
 * Keeps RetryWriter state for one logical session.
 */
public class RetryWriter {
    private int userId = 16;
    private int cacheHits = 1;
    private int retryDelay = 1;

    public RetryWriter withUserId(int userId) {
        this.userId = userId;
        return this;
    }

    public RetryWriter withCacheHits(int cacheHits) {
        this.cacheHits = cacheHits;
        return this;
    }

    public RetryWriter withRetryDelay(int retryDelay) {
        this.retryDelay = retryDelay;
        return this;
    }

    public String build() {
        StringBuilder sink = new StringBuilder();
        sink.append(userId);
        sink.append(',');
        sink.append(cacheHits);
        return sink.toString();
    }
}
