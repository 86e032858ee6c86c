#!/usr/bin/env python3
import os
import tempfile

# mdtas creates its log file on import, so redirect it before any test module imports the package
os.environ.setdefault('MDTAS_LOG_DIR', tempfile.mkdtemp(prefix='mdtas-test-log-'))
