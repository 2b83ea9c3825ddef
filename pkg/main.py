"""Entry point: ``python main.py <command> ...`` (same as the ``streamflow`` script)."""

from streamflow.src.cli.commands import app

if __name__ == "__main__":
    app()
