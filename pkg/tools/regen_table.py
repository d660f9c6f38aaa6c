"""Regenerate src/decparse/_pow5_data.py from first principles."""

import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parents[1]
TARGET = ROOT / "src" / "decparse" / "_pow5_data.py"


def main():
    if not TARGET.exists():
        TARGET.write_text("POW5_128 = (0,) * 651\n")  # bootstrap so the package imports
    sys.path.insert(0, str(ROOT / "src"))
    from decparse.pow5_table import generate_table, render_module

    TARGET.write_text(render_module(generate_table()))
    print(f"wrote {TARGET}")


if __name__ == "__main__":
    main()
