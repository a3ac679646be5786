"""Two processes agree on a key over a loopback TCP socket.

Run: python3 demos/07_network.py
"""

import subprocess
import sys
import tempfile
from pathlib import Path

workdir = Path(tempfile.mkdtemp())
params = workdir / "params.sdkx"
sdkx = [sys.executable, "-m", "sdkx"]

subprocess.run([*sdkx, "keygen", "--t", "64", "--seed", "7", "--out", params], check=True)
responder = subprocess.Popen([*sdkx, "exchange", "responder", "--params", params, "--listen", "127.0.0.1:0"],
                             stdout=subprocess.PIPE, text=True)
address = responder.stdout.readline().split()[-1]
print(f"responder listening on {address}")
initiator = subprocess.run([*sdkx, "exchange", "initiator", "--params", params, "--connect", address],
                           capture_output=True, text=True)
print("initiator:", initiator.stdout.strip())
print("responder:", responder.communicate()[0].strip())
