"""Sentiment-aware citation metrics for ranking authors."""

from sentirank.errors import AnalysisError, InputError, SentirankError

__version__ = "0.1.0"

__all__ = ["AnalysisError", "InputError", "SentirankError", "__version__"]
