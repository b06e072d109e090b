"""Code summarization toolkit: Java method analysis, keyword weighting,
topic modeling, template summaries, and a gamified summary-collection service."""

__version__ = "0.1.0"
