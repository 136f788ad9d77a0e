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

"""Emits a fixed record stream regardless of the program."""

import os

out = os.fdopen(int(os.environ["CEXEC_TRACE_FD"]), "w")
out.write('{"line_no": 1, "state": {"x": "1"}}\n')
out.write('{"line_no": 2, "state": {"x": "1", "s": "\'a b\'"}}\n')
out.write('{"status": "ok", "stdout": "from hook\\n"}\n')
out.flush()
print("from pipe")
