from pathlib import Path

from loguru import logger

from ..utils.utils import dump_json
from .convert import CONVERTERS
from .folds import split_folds
from .manifest import MANIFEST_NAME, load_manifest, rebase_manifest, save_manifest


def split_folds_command(args, config):
    manifest, root = load_manifest(args.manifest)
    out_dir = Path(config.out_dir)
    folds = split_folds(manifest, folds=args.folds, seed=config.seed, masses_only=args.masses_only)

    written = []
    for k, fold in enumerate(folds):
        path = save_manifest(out_dir / f"fold_{k}.json", rebase_manifest(fold, root, out_dir))
        written.append({"fold": k, "entries": len(fold), "path": str(path)})
    logger.success(f"Split {len(manifest)} images into {len(folds)} folds under {out_dir}.")
    print(dump_json(written), end="")
    return 0


def convert_manifest_command(args, config):
    out_dir = Path(config.out_dir)
    manifest = CONVERTERS[args.format](args.source, out_dir)
    path = save_manifest(out_dir / MANIFEST_NAME, manifest)
    logger.success(f"Wrote {len(manifest)} entries to {path}.")
    print(dump_json({"entries": len(manifest), "masses": sum(len(e.gt_boxes) for e in manifest), "path": str(path)}), end="")
    return 0
