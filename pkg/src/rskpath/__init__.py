"""Path transforms, Robinson-Schensted insertion, conditioned walks and tandem queues."""

from rskpath.paths import (
    MultiPath,
    Path,
    inf_conv,
    increments,
    queue_length,
    sup_conv,
    word_to_walk,
)

__all__ = [
    "MultiPath",
    "Path",
    "inf_conv",
    "increments",
    "queue_length",
    "sup_conv",
    "word_to_walk",
]
