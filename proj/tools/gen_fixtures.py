#!/usr/bin/env python3
# Copyright 2026 The QAL Authors
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

"""Regenerates the golden binary fixtures under tests/fixtures.

Written against the wire-format definitions with struct.pack only, so the
fixtures cross-check the C++ codecs rather than echo them.

    python3 tools/gen_fixtures.py [output-dir]
"""

import math
import struct
import sys
from pathlib import Path

QALB_MAGIC = 0x51414C42
QPX_MAGIC = 0x51504558
QPX_VERSION = 0x00010000
HOST_BASE = 0x1_0000_0000

OP = {
    "nop": 0x00, "h": 0x01, "x": 0x02, "y": 0x03, "z": 0x04, "s": 0x05,
    "sdg": 0x06, "t": 0x07, "tdg": 0x08, "rx": 0x10, "ry": 0x11, "rz": 0x12,
    "cx": 0x20, "cz": 0x21, "swap": 0x22, "measure": 0x30, "reset": 0x31,
    "barrier": 0x3F,
}


def qalb(num_qubits, num_cbits, instrs):
    out = struct.pack("<IHHHHI", QALB_MAGIC, 1, num_qubits, num_cbits, 0, len(instrs))
    for op, q0, q1, cbit, param in instrs:
        out += struct.pack("<BBBBf", OP[op], q0, q1, cbit, param)
    return out


def descriptor(job_id, payload_addr, payload_len, shots, flags):
    return struct.pack("<QQIIII", job_id, payload_addr, payload_len, shots, flags, 0)


def completion(job_id, status, result_len, result_addr, exec_time_ns):
    return struct.pack("<QIIQQ", job_id, status, result_len, result_addr, exec_time_ns)


def result(num_cbits, counts):
    out = struct.pack("<II", num_cbits, len(counts))
    for key in sorted(counts):
        out += struct.pack("<QQ", key, counts[key])
    return out


def registers(values):
    """Reads of offsets 0x00..0x3C in order, then the unmapped 0xFC."""
    return struct.pack("<17I", *values)


def main():
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "tests" / "fixtures"
    out_dir.mkdir(parents=True, exist_ok=True)

    bell = [("h", 0, 0, 0, 0.0), ("cx", 0, 1, 0, 0.0), ("measure", 0, 0, 0, 0.0), ("measure", 1, 0, 1, 0.0)]
    fixtures = {
        "empty_1q.qalb": qalb(1, 0, []),
        "hadamard.qalb": qalb(1, 1, [("h", 0, 0, 0, 0.0), ("measure", 0, 0, 0, 0.0)]),
        "bell.qalb": qalb(2, 2, bell),
        "rotations.qalb": qalb(3, 1, [
            ("rx", 0, 0, 0, math.pi / 4),
            ("ry", 1, 0, 0, -0.5),
            ("rz", 2, 0, 0, 3.0),
            ("swap", 2, 0, 0, 0.0),
            ("reset", 1, 0, 0, 0.0),
            ("barrier", 0, 0, 0, 0.0),
            ("measure", 2, 0, 0, 0.0),
        ]),
        "descriptor.bin": descriptor(0x0102030405060708, HOST_BASE + 0x40, 48, 100, 1),
        "completion.bin": completion(7, 0, 40, HOST_BASE + 0x1000, 66000),
        "completion_error.bin": completion(8, 4, 0, 0, 0),
        "result_bell.bin": result(2, {0: 5012, 3: 4988}),
        "result_latency_bell.bin": result(2, {0: 0, 1: 0}),
        # Fresh 16-qubit device: nothing programmed, engine disabled.
        "registers_poweron.bin": registers([
            QPX_MAGIC, QPX_VERSION, 16 | 1 << 8 | 1 << 9, 0, 0, 0,
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0xFFFFFFFF,
        ]),
        # 4-qubit device after: SQ at HOST_BASE (8 slots), CQ at
        # HOST_BASE+0x100 (8 slots), IRQ_MASK=1, CTRL=ENABLE|LATENCY.
        "registers_configured.bin": registers([
            QPX_MAGIC, QPX_VERSION, 4 | 1 << 8 | 1 << 9, 0b101, 0b1, 0,
            HOST_BASE & 0xFFFFFFFF, HOST_BASE >> 32, 8,
            (HOST_BASE + 0x100) & 0xFFFFFFFF, (HOST_BASE + 0x100) >> 32, 8,
            0, 1, 0, 0, 0xFFFFFFFF,
        ]),
    }
    for name, data in fixtures.items():
        (out_dir / name).write_bytes(data)
        print(f"{name}: {len(data)} bytes")


if __name__ == "__main__":
    main()
