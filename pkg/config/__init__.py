"""Configuration defaults for the detection toolkit."""
