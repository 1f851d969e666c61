from collections import defaultdict

from loguru import logger

from ..utils.errors import ParameterError
from ..utils.utils import make_rng
from .manifest import DatasetManifest

FOLD_STREAM = 7


def split_folds(manifest, folds=2, seed=0, masses_only=False):
    """
    Partition a manifest into ``folds`` cross-validation folds.

    Images are grouped per breast so the CC and MLO views of one breast always
    share a fold. Groups are visited in a seeded order and each goes to the
    fold currently holding the fewest views.
    """
    if folds < 2:
        raise ParameterError(f"Need at least 2 folds, got {folds}.")
    entries = [e for e in manifest.entries if e.has_masses or not masses_only]
    if masses_only:
        logger.info(f"Keeping {len(entries)} of {len(manifest)} images that carry masses.")

    groups = defaultdict(list)
    for entry in entries:
        groups[entry.breast_key].append(entry)
    keys = sorted(groups)
    order = make_rng(seed, FOLD_STREAM).permutation(len(keys))

    buckets = [[] for _ in range(folds)]
    for index in order:
        target = min(range(folds), key=lambda k: (len(buckets[k]), k))
        buckets[target].extend(groups[keys[index]])

    result = []
    for k, bucket in enumerate(buckets):
        tagged = [e.model_copy(update={"split_tag": f"fold{k}"}) for e in bucket]
        result.append(DatasetManifest(entries=tagged))
        logger.info(f"Fold {k}: {len(tagged)} views from {len({e.breast_key for e in tagged})} breasts.")
    return result
