import logging
import os
import sys
import traceback

from src.commands import EXIT_FAILURE, build_parser, run
from src.config import ConfigHandler

logger = logging.getLogger(__name__)
library_logger = logging.getLogger("src")
formatter = logging.Formatter("%(asctime)s - %(levelname)s - %(message)s")
ch_log = logging.StreamHandler(sys.stderr)
ch_log.setLevel(logging.INFO)
ch_log.setFormatter(formatter)
for target in (logger, library_logger):
    target.addHandler(ch_log)
    target.setLevel(logging.DEBUG)


def attach_file_log(config):
    log_file = os.path.expanduser(config.setting("LOGGING", "log_file"))
    directory = os.path.dirname(log_file)
    if directory:
        os.makedirs(directory, exist_ok=True)
    file_log = logging.FileHandler(log_file)
    file_log.setLevel(config.setting("LOGGING", "file_log_level"))
    file_log.setFormatter(formatter)
    for target in (logger, library_logger):
        target.addHandler(file_log)


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.verbose:
        ch_log.setLevel(logging.DEBUG)
    try:
        config = ConfigHandler(os.path.expanduser(args.config), logger)
        attach_file_log(config)
    except Exception as e:
        logger.error("Error loading config: " + str(e))
        logger.error(traceback.format_exc())
        return EXIT_FAILURE
    return run(args, config, logger)


if __name__ == "__main__":
    sys.exit(main())
