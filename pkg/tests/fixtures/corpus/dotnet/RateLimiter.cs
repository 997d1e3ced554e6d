using System;

public class RateLimiter
{
    private readonly int capacity;
    private readonly double refillPerSecond;
    private double tokens;
    private DateTime last;

    public RateLimiter(int capacity, double refillPerSecond)
    {
        this.capacity = capacity;
        this.refillPerSecond = refillPerSecond;
        tokens = capacity;
        last = DateTime.UtcNow;
    }

    public bool TryAcquire()
    {
        var now = DateTime.UtcNow;
        var elapsed = (now - last).TotalSeconds;
        last = now;
        tokens = Math.Min(capacity, tokens + elapsed * refillPerSecond);
        if (tokens >= 1.0)
        {
            tokens -= 1.0;
            return true;
        }
        return false;
    }
}
