package retry

import (
	"context"
	"time"
)

type Func func(ctx context.Context) error

func Do(ctx context.Context, attempts int, base time.Duration, fn Func) error {
	var err error
	for i := 0; i < attempts; i++ {
		if err = fn(ctx); err == nil {
			return nil
		}
		delay := base << uint(i)
		select {
		case <-ctx.Done():
			return ctx.Err()
		case <-time.After(delay):
		}
	}
	return err
}
