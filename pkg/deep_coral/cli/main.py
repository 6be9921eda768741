from deep_coral.cli.app import app


def main() -> None:
    app(prog_name="deep-coral")
