"""Entry point: python cli.py <command> ... (see hashlab/cli.py)."""
from hashlab.cli import main

if __name__ == "__main__":
    main()
