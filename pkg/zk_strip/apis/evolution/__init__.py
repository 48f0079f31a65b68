# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

from .evolution import *  # noqa: F401 F403
