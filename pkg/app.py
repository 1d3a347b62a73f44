"""
HomLab 主程式
日誌一律寫到 stderr，讓 --json 的 stdout 保持乾淨
"""
import logging
import sys

from config.settings import get_config
from core.dependencies import setup_dependency_injection
from presentation.cli.main import main
from shared.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


def run() -> int:
    try:
        config = get_config()
    except ConfigurationError as e:
        logging.basicConfig(stream=sys.stderr, level=logging.WARNING)
        logger.error("配置無效: %s", e.message)
        return 1

    logging.basicConfig(
        stream=sys.stderr,
        level=config.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logger.debug("HomLab 啟動 | Debug=%s | Oracle=%s", config.debug_mode, config.campaign.oracle_mode)
    container = setup_dependency_injection(config)
    return main(sys.argv[1:], container=container)


if __name__ == "__main__":
    sys.exit(run())
