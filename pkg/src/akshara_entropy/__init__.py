"""Letter segmentation, canonical letter sets and k-gram entropies for Devanagari text."""

from .approximator import PLACEHOLDER, ApproximatedText, approximate, approximate_letters, replaced_fraction
from .corpus import Article, Book, count_letters, load_articles, partition, read_manifest, split_books
from .entropy import (
    BlockDistribution,
    EntropyReport,
    FiniteDistribution,
    block_distribution,
    block_entropies,
    block_entropy,
    conditional_entropy,
    kgram_grid,
    mesh_crossings,
    shannon_entropy,
)
from .letterstats import (
    R_VALUES,
    FrequencyTable,
    LetterSetFamily,
    ProbabilityTable,
    ShareCurve,
    canonical_sets,
    probabilities,
    sanity_ratio,
    share_curve,
    top_share_set,
    word_length_stats,
)
from .segmenter import Letter, Token, iter_letters, letters_of, segment, words_of
from .table_io import LetterTable, TableError, emit_table, load_table, reference_table, tier_set

__version__ = "0.1.0"
