import argparse
import sys

from src.cli import main

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description='circleconj - changes of variable for conjugate functions on the circle')
    parser.add_argument('--log-level', default=None, help='Logging level (default: $CIRCLECONJ_LOG_LEVEL or INFO)')
    parser.add_argument('command', nargs=argparse.REMAINDER, help='Subcommand and its arguments, e.g. solve --config cos')
    args = parser.parse_args()

    sys.exit(main(args.command, log_level=args.log_level))
