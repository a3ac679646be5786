"""Framed messages for the two-party exchange over a stream socket.

Frame layout (all integers big-endian)::

    b"SDKX" | version (1 byte) | msg_type (1 byte) | payload_len (4 bytes) | payload
"""

from __future__ import annotations

import enum
import hashlib
import socket
import struct
from dataclasses import dataclass

from .algebra import MATRIX_BYTES

MAGIC = b"SDKX"
VERSION = 1
HEADER = struct.Struct(">4sBBI")
DIGEST_BYTES = 32
MAX_PAYLOAD = 1 << 20


class ProtocolError(Exception):
    """Malformed, unexpected or truncated frame."""


class MsgType(enum.IntEnum):
    PARAMS = 1
    TRANSMIT = 2
    CONFIRM = 3


EXPECTED_PAYLOAD = {
    MsgType.PARAMS: DIGEST_BYTES,
    MsgType.TRANSMIT: MATRIX_BYTES,
    MsgType.CONFIRM: DIGEST_BYTES,
}


@dataclass(frozen=True)
class WireMessage:
    msg_type: MsgType
    payload: bytes

    def encode(self) -> bytes:
        return HEADER.pack(MAGIC, VERSION, int(self.msg_type), len(self.payload)) + self.payload

    @classmethod
    def parse_header(cls, header: bytes) -> tuple[MsgType, int]:
        if len(header) != HEADER.size:
            raise ProtocolError("truncated header")
        magic, version, msg_type, length = HEADER.unpack(header)
        if magic != MAGIC:
            raise ProtocolError(f"bad magic {magic!r}")
        if version != VERSION:
            raise ProtocolError(f"unsupported version {version}")
        try:
            kind = MsgType(msg_type)
        except ValueError:
            raise ProtocolError(f"unknown message type {msg_type}") from None
        if length > MAX_PAYLOAD:
            raise ProtocolError(f"payload length {length} exceeds limit")
        return kind, length

    @classmethod
    def decode(cls, data: bytes) -> "WireMessage":
        kind, length = cls.parse_header(data[: HEADER.size])
        payload = data[HEADER.size:]
        if len(payload) != length:
            raise ProtocolError(f"payload_len {length} but {len(payload)} payload bytes")
        return cls(kind, payload)


def _recv_exact(sock: socket.socket, n: int) -> bytes:
    chunks = []
    while n:
        chunk = sock.recv(n)
        if not chunk:
            raise ProtocolError("connection closed mid-frame")
        chunks.append(chunk)
        n -= len(chunk)
    return b"".join(chunks)


def send_message(sock: socket.socket, msg: WireMessage):
    sock.sendall(msg.encode())


def recv_message(sock: socket.socket, expect: MsgType | None = None) -> WireMessage:
    kind, length = WireMessage.parse_header(_recv_exact(sock, HEADER.size))
    if expect is not None and kind != expect:
        raise ProtocolError(f"expected {expect.name}, got {kind.name}")
    if length != EXPECTED_PAYLOAD[kind]:
        raise ProtocolError(f"{kind.name} payload must be {EXPECTED_PAYLOAD[kind]} bytes, got {length}")
    return WireMessage(kind, _recv_exact(sock, length))


def fingerprint(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


def key_fingerprint(key_bytes: bytes) -> str:
    """Printable fingerprint of a shared key; safe to display."""
    return hashlib.sha256(b"sdkx-key-fingerprint" + key_bytes).hexdigest()


def confirm_digest(key_bytes: bytes) -> bytes:
    """Key-confirmation value carried in CONFIRM; never the key itself."""
    return hashlib.sha256(b"sdkx-key-confirm" + key_bytes).digest()


def parse_address(addr: str) -> tuple[str, int]:
    host, sep, port = addr.rpartition(":")
    if not sep:
        raise ValueError(f"address must be host:port, got {addr!r}")
    return host or "127.0.0.1", int(port)
