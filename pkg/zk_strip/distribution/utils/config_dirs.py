# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import os
from pathlib import Path


ZK_STRIP_CONFIG_DIR = Path(
    os.getenv("ZK_STRIP_CONFIG_DIR", os.path.expanduser("~/.zk_strip/"))
)

RUNS_BASE_DIR = ZK_STRIP_CONFIG_DIR / "runs"
