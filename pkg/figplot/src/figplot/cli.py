"""Usage: figplot <in.csv> <out.png>"""

import argparse
import sys

from .render import SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figplot", description="plot a secrecy-dimension sweep CSV")
    parser.add_argument("csv", help="sweep CSV (g,k,ks_direct,ks_forwarded,ks_lrc_no_global)")
    parser.add_argument("out", help="output image path")
    args = parser.parse_args(argv)
    try:
        render(args.csv, args.out)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
