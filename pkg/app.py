# app.py
# Main entry point for the Extremal Polynomial Suite command-line tool.
# This file loads the environment, configures logging and hands off to the CLI dispatcher.

# ====================================================================================================
# SECTION 1: GLOBAL IMPORTS AND INITIAL CONFIGURATION
# Environment variables are loaded before any module reads its settings. Logging goes
# to stderr and reports go to stdout.
# ====================================================================================================

# 1.1 Standard Library Imports
import logging
import os
import sys

# 1.2 Third-Party Library Imports
try:
    from dotenv import load_dotenv
except ImportError as e:
    logging.error(f"Critical import error: {e}. Please ensure 'python-dotenv' is installed.")
    sys.exit(70)

# Load environment variables from .env file at the very start.
load_dotenv()

LOG_LEVEL = os.getenv("EXTREMAL_POLY_LOG_LEVEL", "INFO").upper()
logging.basicConfig(level=getattr(logging, LOG_LEVEL, logging.INFO),
                    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
                    stream=sys.stderr)
logger = logging.getLogger(__name__)

# ====================================================================================================
# SECTION 2: DISPATCH
# ====================================================================================================

from modules import cli  # noqa: E402  (after logging is configured)


def main() -> int:
    logger.debug(f"Starting with argv {sys.argv[1:]}")
    return cli.main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
