# Copyright 2026 The dexlift Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Compares dexlift's reading of the fixture images with androguard's.

usage: androguard_check.py WRITE_FIXTURES_BINARY
Exits 77 (skip) when androguard is not installed.
"""

import json
import logging
import subprocess
import sys
import tempfile
from pathlib import Path

try:
    from androguard.core.dex import DEX
except ImportError:
    print("androguard not available; skipping")
    sys.exit(77)

try:
    from loguru import logger

    logger.remove()
except ImportError:
    pass
logging.disable(logging.CRITICAL)


def androguard_digest(raw):
    d = DEX(raw)
    classes = []
    for c in d.get_classes():
        methods = []
        for m in c.get_methods():
            mnemonics = []
            code = m.get_code()
            if code is not None:
                for ins in m.get_instructions():
                    name = ins.get_name()
                    if name.endswith("-payload"):
                        continue
                    mnemonics.append(name)
            methods.append((m.get_name(), m.get_descriptor().replace(" ", ""), mnemonics))
        classes.append((c.get_name(), c.get_superclassname(), methods))
    return list(d.get_strings()), classes


def ours_digest(doc):
    classes = []
    for c in doc["classes"]:
        methods = [(m["name"], m["descriptor"], m["mnemonics"]) for m in c["methods"]]
        classes.append((c["name"], c["superclass"], methods))
    return doc["strings"], classes


def main():
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run([sys.argv[1], tmp], check=True)
        for dex in sorted(Path(tmp).glob("*.dex")):
            theirs_strings, theirs = androguard_digest(dex.read_bytes())
            ours_strings, ours = ours_digest(json.loads(dex.with_suffix(".json").read_text()))
            if [str(s) for s in theirs_strings] != ours_strings:
                print(f"{dex.name}: string pools differ\n  androguard {theirs_strings}\n  dexlift    {ours_strings}")
                failures += 1
            if sorted(theirs) != sorted(ours):
                print(f"{dex.name}: class models differ\n  androguard {theirs}\n  dexlift    {ours}")
                failures += 1
            else:
                print(f"{dex.name}: {len(ours)} classes agree")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
