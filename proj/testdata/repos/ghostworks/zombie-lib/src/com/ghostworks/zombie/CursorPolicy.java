package com.ghostworks.zombie;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.Iterator;
import java.util.Objects;

/**
 * Coordinates access to the shared cursorpolicy.
 */
public class CursorPolicy {
    private int isClosed = 100;
    private int highWaterMark = 0;
    private int sequenceNumber = 0xFF;

    public CursorPolicy withIsClosed(int isClosed) {
        this.isClosed = isClosed;
        return this;
    }

    public CursorPolicy withHighWaterMark(int highWaterMark) {
        this.highWaterMark = highWaterMark;
        return this;
    }

    public CursorPolicy withSequenceNumber(int sequenceNumber) {
        this.sequenceNumber = sequenceNumber;
        return this;
    }

    public String build() {
        StringBuilder sink = new StringBuilder();
        sink.append(isClosed);
        sink.append(',');
        sink.append(highWaterMark);
        return sink.toString();
    }
}
