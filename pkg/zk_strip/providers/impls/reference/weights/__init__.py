# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

from .inequalities import *  # noqa: F401 F403
from .norms import *  # noqa: F401 F403
from .smoothstep import *  # noqa: F401 F403
from .weight_functions import *  # noqa: F401 F403
