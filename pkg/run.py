import logging
import sys

from app import CommandLine
from app.host.host import LOG_FORMAT, Host
from app.models.errors import FogeError

logger = logging.getLogger(__name__)


def main(argv=None) -> int:
    try:
        args = CommandLine.parse_arguments(argv)
    except FogeError as e:
        Host.report_error(e.kind, e.exit_code, e.message)
        return e.exit_code
    # Create an instance of Host with parsed arguments
    instance = Host(args)
    return instance.run()


if __name__ == '__main__':
    # Setup logging configuration
    logging.basicConfig(
        level=logging.INFO,
        format=LOG_FORMAT
    )

    sys.exit(main())
