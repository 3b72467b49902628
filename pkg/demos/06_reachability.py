# Is the mesh actually connected right now? Placing nodes by hand makes that
# question surprisingly expensive to answer by walking around with a laptop.
# The probe answers it over the air: flood a ping, wait a deadline, and list
# who acknowledged.

from meshsim import NodeSpec, Role, ScenarioConfig, World, check_reachability


def street(bridge_x):
    # two clusters joined by a single bridge node at bridge_x
    topology = [
        NodeSpec(0, 0.0, 0.0, Role.MOBILE_HUB),
        NodeSpec(1, 5.0, 0.0, Role.COMMANDER),
        NodeSpec(2, 10.0, 0.0, Role.SENSOR),
        NodeSpec(3, bridge_x, 0.0, Role.SENSOR),
        NodeSpec(4, 20.0, 0.0, Role.SENSOR),
        NodeSpec(5, 25.0, 0.0, Role.SENSOR),
    ]
    return ScenarioConfig(topology=topology, duration_ms=600_000,
                          radio_preset="ground",
                          heartbeat_period_ms=60_000, data_period_ms=60_000)


print("bridge in place at x=15:")
report = check_reachability(World(street(15.0)), deadline_ms=2_000)
print(f"  acked:   {sorted(report.acked)}")
print(f"  missing: {sorted(report.missing)}")

print()
print("bridge carried off to x=100 (dead battery, bored passer-by, ...):")
report = check_reachability(World(street(100.0)), deadline_ms=2_000)
print(f"  acked:   {sorted(report.acked)}")
print(f"  missing: {sorted(report.missing)}")
print()
print("the far cluster and the bridge itself are unreachable -- exactly the")
print("component cut off from the prober, so the run would be invalid.")
