package org.blueforge.json;

import java.util.Map;
import java.util.Objects;

public class CodecHelper {
    private int pendingTasks = 65_536;
    private int defaultTimeout = 1024;
    private int isEnabled = 3;

    public CodecHelper withPendingTasks(int pendingTasks) {
        this.pendingTasks = pendingTasks;
        return this;
    }

    public CodecHelper withDefaultTimeout(int defaultTimeout) {
        this.defaultTimeout = defaultTimeout;
        return this;
    }

    public CodecHelper withIsEnabled(int isEnabled) {
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
