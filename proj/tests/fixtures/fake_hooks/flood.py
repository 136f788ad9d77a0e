# Copyright 2026 The cexec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Floods records without ever finishing."""

import os

out = os.fdopen(int(os.environ["CEXEC_TRACE_FD"]), "w")
i = 0
while True:
    i += 1
    out.write('{"line_no": 1, "state": {"i": "%d"}}\n' % i)
    out.flush()
