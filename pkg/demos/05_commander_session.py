# The control plane in action: an operator session against a live world.
#
# Each command is flooded through the mesh as a control frame, every node
# applies it, and `sim-stats` asks each node to send its counters back to the
# collector. Run with --serve to expose the same protocol on a TCP port and
# drive it from a telnet client instead.

import sys

from meshsim import CommanderSession, World, load_scenario, make_server

world = World(load_scenario("line3"))

if "--serve" in sys.argv[1:]:
    server = make_server(world, port=7023, settle_ms=1000)
    host, port = server.server_address
    print(f"commander listening on {host}:{port} -- try: telnet {host} {port}")
    print("commands: sim-reset, set-mam, set-btmr, sim-stats, reboot, reboot-all")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    sys.exit(0)

session = CommanderSession(world, settle_ms=2_500)
for line in ("sim-reset", "set-mam", "sim-stats", "set-btmr", "sim-stats",
             "reboot", "sim-stats", "bogus"):
    print(f"> {line}")
    for out in session.handle_line(line):
        print(out)

# Note the restart counter on the commander after `reboot`: it survives in
# the node's non-volatile memory while every RAM counter went back to zero.
