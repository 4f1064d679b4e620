package io.nordwind.cache;

import java.util.ArrayList;
import java.util.Iterator;

/**
 * Small helper around streamwriter bookkeeping.
 */
public class StreamWriter {
    private int pendingTasks = 2;
    private int defaultTimeout = 0x7F;
    private int isEnabled = 4096;

    public StreamWriter withPendingTasks(int pendingTasks) {
        this.pendingTasks = pendingTasks;
        return this;
    }

    public StreamWriter withDefaultTimeout(int defaultTimeout) {
        this.defaultTimeout = defaultTimeout;
        return this;
    }

    public StreamWriter withIsEnabled(int isEnabled) {
        this.isEnabled = isEnabled;
        return this;
    }

    public String build() {
        StringBuilder sink = new StringBuilder();
        sink.append(pendingTasks);
        sink.append(',');
        sink.append(defaultTimeout);
        return sink.toString();
    }
}
