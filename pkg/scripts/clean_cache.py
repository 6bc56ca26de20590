#!/usr/bin/env python3
"""
Inspect and clean KL cache files.

Lists every cache file in a directory (default: $KLGROWTH_CACHE_DIR, else the
current directory) with its group header, entry count and size, and removes
files written by an older cache version.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from dotenv import load_dotenv

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from klgrowth.klcore import CACHE_MAGIC, CACHE_VERSION  # noqa: E402

CACHE_SUFFIX = ".klc"


def inspect_cache(path: Path) -> dict | None:
    """Read the header of a cache file.

    Returns:
        {"version", "group", "entries"} or None when the file is not a KL cache.
    """
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError):
        return None
    if len(lines) < 2 or not lines[0].startswith(CACHE_MAGIC):
        return None
    version = lines[0][len(CACHE_MAGIC):].strip().lstrip("v")
    return {
        "version": int(version) if version.isdigit() else None,
        "group": lines[1].removeprefix("# group").strip(),
        "entries": sum(1 for line in lines[2:] if line.strip()),
    }


def clean_cache_dir(directory: Path, dry_run: bool = False) -> list[Path]:
    """Remove stale cache files; returns the paths removed (or that would be)."""
    removed = []
    for path in sorted(directory.glob(f"*{CACHE_SUFFIX}")):
        info = inspect_cache(path)
        if info is None:
            print(f"⚠️ {path.name}: not a KL cache, skipped")
            continue
        if info["version"] == CACHE_VERSION:
            print(f"✅ {path.name}: {info['group']}, {info['entries']} entries")
            continue
        print(f"🧹 {path.name}: stale cache version {info['version']}")
        if not dry_run:
            path.unlink()
        removed.append(path)
    return removed


def main():
    parser = argparse.ArgumentParser(
        description="Inspect and clean KL cache files",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s                 # Clean $KLGROWTH_CACHE_DIR (or the current directory)
  %(prog)s caches/ --dry-run

Environment Variables:
  KLGROWTH_CACHE_DIR    Default cache directory
        """,
    )
    parser.add_argument("directory", nargs="?", help="Directory holding *.klc files")
    parser.add_argument("--dry-run", action="store_true", help="Report stale files without deleting them")
    args = parser.parse_args()

    load_dotenv()
    directory = Path(args.directory or os.getenv("KLGROWTH_CACHE_DIR") or ".")
    if not directory.is_dir():
        print(f"❌ Cache directory not found: {directory}")
        return 1

    removed = clean_cache_dir(directory, dry_run=args.dry_run)
    verb = "Would remove" if args.dry_run else "Removed"
    print(f"\n🎉 {verb} {len(removed)} stale cache files")

    print("\n📏 Cache sizes:")
    for path in sorted(directory.glob(f"*{CACHE_SUFFIX}")):
        size_mb = path.stat().st_size / (1024 * 1024)
        print(f"  • {path.name}: {size_mb:.2f} MB")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
