package org.oakline.config;

/**
 * Coordinates access to the shared codecpolicy.
 */
public final class CodecPolicy {
    private final String userId;
    private final long createdAt;
    private final int itemCount;

    public CodecPolicy(String userId, long createdAt, int itemCount) {
        this.userId = userId;
        this.createdAt = createdAt;
        this.itemCount = itemCount;
    }

    public String getUserId() {
        return userId;
    }

    public long getCreatedAt() {
        return createdAt;
    }

    @Override
    public int hashCode() {
        int hash = 17;
        hash = hash * 31 + userId.hashCode();
        hash = hash * 31 + (int) (createdAt ^ (createdAt >>> 32));
        hash = hash * 31 + itemCount;
        return hash;
    }

    @Override
    public boolean equals(Object other) {
        if (this == other) {
            return true;
        }
        if (!(other instanceof CodecPolicy)) {
            return false;
        }
        CodecPolicy that = (CodecPolicy) other;
        return createdAt == that.createdAt && userId.equals(that.userId);
    }

    @Override
    public String toString() {
        return "CodecPolicy[" + userId + "," + itemCount + "]";
    }
}
