"""Ontoforge: learn a semantic-network knowledge base from a year-partitioned news corpus.

The pipeline: load and partition a corpus by year, extract high-frequency
seed words per partition, train one skip-gram embedding model per partition,
expand seeds into candidate assertions via nearest neighbors, collect human
relation labels and expert agree/disagree judgments, and analyze how labeled
assertions change across partitions.
"""

__version__ = "0.1.0"

from ontoforge.errors import OntoforgeError

__all__ = ["OntoforgeError", "__version__"]
