#!/usr/bin/env python3
import sys
from colorama import init

import mdtas.utils
from mdtas.mdtas import main as _main_


def main(args=None):
    ''' Console entry point, see `mdtas --help` '''
    init()

    try:
        _main_(sys.argv if args is None else args)
    except KeyboardInterrupt:
        mdtas.utils.keyboard_interrupt_log()


if __name__ == "__main__":
    main()
