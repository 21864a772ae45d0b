"""attribeval: summary generation, sentence-level attribution scoring, and
human-annotation tallying for summarization evaluation studies."""

__version__ = "0.1.0"
