package config

import (
	"os"
	"strconv"
	"time"
)

type Config struct {
	Addr         string
	ReadTimeout  time.Duration
	MaxBodyBytes int64
	Debug        bool
}

func FromEnv() Config {
	cfg := Config{
		Addr:         ":8080",
		ReadTimeout:  5 * time.Second,
		MaxBodyBytes: 1 << 20,
	}
	if v := os.Getenv("ADDR"); v != "" {
		cfg.Addr = v
	}
	if v := os.Getenv("READ_TIMEOUT"); v != "" {
		if d, err := time.ParseDuration(v); err == nil {
			cfg.ReadTimeout = d
		}
	}
	if v := os.Getenv("DEBUG"); v != "" {
		cfg.Debug, _ = strconv.ParseBool(v)
	}
	return cfg
}
