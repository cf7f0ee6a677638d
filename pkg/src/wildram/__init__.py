"""Wild ramification of Artin-Schreier towers over F_q((x))."""

__version__ = "0.1.0"
