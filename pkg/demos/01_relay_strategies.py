# Walk through the two relay decision functions by hand, one frame at a time.
#
# A flooding relay rebroadcasts everything it has not seen recently; the
# reactive strategy learns a best neighbor from the collector's heartbeats
# and unicasts data along that chain instead.

from meshsim import (
    MamState,
    Message,
    MessageKind,
    RelayCache,
    btmr_relay,
    mam_handle,
)

# --- controlled flooding ----------------------------------------------------

cache = RelayCache(capacity=3)
reading = Message(MessageKind.DATA, origin=2, seq=0, hops=0, sender=2, payload=b"\x17")

print("flooding relay, first contact:   ", btmr_relay(cache, 2, 0, reading))
print("same frame from another neighbor:", btmr_relay(cache, 3, 1, reading))

stale = Message(MessageKind.DATA, origin=2, seq=1, hops=127, sender=2, payload=b"\x17")
print("hop budget exhausted:            ", btmr_relay(cache, 2, 127, stale))

# The cache is a bounded LRU, so old entries age out and a frame can relay
# again once enough newer traffic displaced it.
for seq in (10, 11, 12):
    btmr_relay(cache, 2, 0, Message(MessageKind.DATA, 2, seq, 0, 2, b"\x17"))
print("after 3 newer frames, the first relays again:",
      btmr_relay(cache, 2, 0, reading))

# --- reactive least-hop route --------------------------------------------------

# Nodes start with no route at all. The first heartbeat is always accepted
# (the empty route counts as expired); afterwards only strictly fewer hops,
# or an expired entry, change the cached neighbor.
state = MamState(delta_ms=100_000)
cache = RelayCache(capacity=20)

def hb(seq, hops, sender):
    return Message(MessageKind.HEARTBEAT, origin=0, seq=seq, hops=hops, sender=sender)

print()
print("before any heartbeat:", state)
mam_handle(state, 1_000, cache, sender=7, hops=2, message=hb(0, 2, 7))
print("heartbeat via node 7:", state)

mam_handle(state, 3_000, cache, sender=9, hops=5, message=hb(1, 5, 9))
print("worse offer ignored: ", state)

mam_handle(state, 4_000, cache, sender=4, hops=1, message=hb(2, 1, 4))
print("fewer hops accepted: ", state)

# Data rides the cached route as a unicast; with no route it is dropped.
print("data with a route:   ",
      mam_handle(state, 5_000, cache, 2, 0, reading))
print("data without a route:",
      mam_handle(MamState(delta_ms=100_000), 5_000, cache, 2, 0, reading))

# After the expiry window, whoever forwards the next heartbeat wins -- that is
# how routes follow a moving collector.
mam_handle(state, 200_000, cache, sender=9, hops=6, message=hb(3, 6, 9))
print("after expiry:        ", state)
