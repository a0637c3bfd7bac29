"""Virtual periods of generating-field sequences of linear recurrences over cyclotomic fields."""

__version__ = "0.1.0"
