import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from datasets.fingerprint import Hasher
from loguru import logger
from threadpoolctl import threadpool_limits
from tqdm import tqdm


def make_rng(seed, *keys):
    """
    Build the generator for one stream of the pipeline.

    Streams are addressed by integer spawn keys under the global seed, so
    ``make_rng(seed, i)`` for different ``i`` are independent and every stream
    is reproducible on any platform (PCG64 through ``SeedSequence``).
    """
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(sequence))


def split_seed(seed, *keys):
    # 64-bit child seed, recorded in audit files
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def config_fingerprint(*parts):
    return Hasher.hash([_plain(part) for part in parts])


def _plain(value):
    if hasattr(value, "model_dump"):
        return value.model_dump(mode="json")
    return value


def dump_json(obj):
    return json.dumps(_plain(obj), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(obj), encoding="utf-8")
    return path


def read_json(path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_jsonl(path, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(_plain(row), sort_keys=True, separators=(",", ":")) + "\n")
    return path


def run_parallel(fn, items, jobs=1, desc=None):
    """
    Apply ``fn`` to every item with a bounded worker pool.

    Results come back in input order. Each result is either ``(True, value)``
    or ``(False, exception)`` so one failing item never aborts the batch.
    """
    items = list(items)

    def guarded(item):
        try:
            return True, fn(item)
        except Exception as e:
            return False, e

    # Bug with numpy causes oversubscription when several workers each spawn BLAS threads
    with threadpool_limits(limits=1, user_api="blas"):
        if jobs <= 1:
            results = [guarded(item) for item in tqdm(items, desc=desc, disable=desc is None)]
        else:
            with ThreadPoolExecutor(max_workers=jobs) as executor:
                results = list(
                    tqdm(executor.map(guarded, items), total=len(items), desc=desc, disable=desc is None)
                )

    failures = sum(1 for ok, _ in results if not ok)
    if failures:
        logger.warning(f"{failures} out of {len(items)} items failed.")
    return results
