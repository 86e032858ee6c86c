#!/usr/bin/env python3
import pathlib
import logging
import logging.handlers
import mdtas_test.consts


class MDTASTestLogger():
    """
    Object used for logging while mdtas tests are executing. Log files are
    written next to the package log, in $MDTAS_LOG_DIR/mdtas-test.log
    """

    def __init__(self):
        self.log_file: str = mdtas_test.consts.MDTAS_TEST_LOG_FILE

        pathlib.Path(mdtas_test.consts.MDTAS_TEST_LOG_DIR).mkdir(parents=True, exist_ok=True)
        pathlib.Path(self.log_file).touch(exist_ok=True)

        self.log_format: str = "%(asctime)s.%(msecs)03d %(levelname)s %(module)s - %(funcName)s: %(message)s"
        logging.basicConfig(filename=self.log_file, format=self.log_format)
        logger: logging.Logger = logging.getLogger()
        logger.setLevel(logging.INFO)

        self.handler = logging.handlers.RotatingFileHandler(
            self.log_file,
            mode="a",
            maxBytes=1024*1024,
            backupCount=2,
            encoding=None,
            delay=False
        )

        logger.addHandler(self.handler)
        self.logger = logger
