from .config import COMMANDS, TARGETS, MalformedConfig, RunConfig
from .main import (EXIT_NONCONVERGENCE, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, SCHEMA_VERSION, build_parser,
                   build_systems, main, report_document, run)
