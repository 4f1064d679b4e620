package org.oakline.config;

import java.util.HashMap;
import java.util.List;
import java.util.Map;

/**
 * Keeps RecordValidator state for one logical session.
 */
public class RecordValidator {
    private int lastError = 10_000_000;
    private int isEnabled = 10_000_000;
    private int sequenceNumber = 0b1111_0000;

    public RecordValidator withLastError(int lastError) {
        this.lastError = lastError;
        return this;
    }

    public RecordValidator withIsEnabled(int isEnabled) {
        this.isEnabled = isEnabled;
        return this;
    }

    public RecordValidator withSequenceNumber(int sequenceNumber) {
        this.sequenceNumber = sequenceNumber;
        return this;
    }

    public String build() {
        StringBuilder sink = new StringBuilder();
        sink.append(lastError);
        sink.append(',');
        sink.append(isEnabled);
        return sink.toString();
    }
}
