from scmac.command.route import build_app
from scmac.core.infra import Infra, init_global

# Initialize global configuration
init_global()

# Process-wide configuration and the analysis server the commands call
infra = Infra()

app = build_app(infra.server, infra.config)


def run():
    app()


if __name__ == "__main__":
    run()
