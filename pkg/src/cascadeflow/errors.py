"""Shared exception types, mapped to CLI exit codes."""


class InputError(ValueError):
    """Malformed or unusable input data (CLI exit code 1)."""


class ConfigError(ValueError):
    """Invalid configuration key or value (CLI exit code 2)."""
