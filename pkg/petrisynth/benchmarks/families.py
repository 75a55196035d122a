"""Generators for the scalable benchmark families.

All generated games are safe and concurrency-preserving, with a single
environment token. Bad behaviour is detected by check transitions that
move a system token to a bad place; refusing a check leaves the game
deadlocked, which is losing as well.
"""

from collections.abc import Iterable
from itertools import combinations
from string import ascii_uppercase

from petrisynth.net.game import PetriGame


class _Net:
    """Accumulates places, transitions and arcs in declaration order."""

    def __init__(self) -> None:
        self.system: list[str] = []
        self.env: list[str] = []
        self.transitions: list[str] = []
        self.flow: list[tuple[str, str]] = []
        self.initial: list[str] = []
        self.bad: list[str] = []

    def place(self, name: str, env: bool = False, initial: bool = False, bad: bool = False) -> str:
        (self.env if env else self.system).append(name)
        if initial:
            self.initial.append(name)
        if bad:
            self.bad.append(name)
        return name

    def transition(self, name: str, pre: Iterable[str], post: Iterable[str]) -> str:
        self.transitions.append(name)
        self.flow.extend((p, name) for p in pre)
        self.flow.extend((name, p) for p in post)
        return name

    def build(self) -> PetriGame:
        return PetriGame.build(
            system_places=self.system,
            env_places=self.env,
            transitions=self.transitions,
            flow=self.flow,
            initial=self.initial,
            bad=self.bad,
        )


def alarm_system(m: int) -> PetriGame:
    """AS(m): a burglar intrudes one of m locations; every alarm must name it.

    Location X has the environment place L_X (intruded) and the alarm token
    starting in S_X. The alarm detects the burglar with t_X or raises a
    premature alarm with fa_X. After detecting it informs all other alarms
    at once or keeps it to itself (fr_X). The token then reaches p_X and
    sets off one alarm XY, "intrusion at Y". Checks bot_<E>_<XY> send it
    to bad_X for a false alarm (E = Env, nobody intruded yet) or a false report
    (E = L_Z with Z != Y).
    """
    names = ascii_uppercase[:m]
    net = _Net()
    env = net.place("Env", env=True, initial=True)
    for x in names:
        net.place(f"L{x}", env=True)
    for x in names:
        net.place(f"S{x}", initial=True)
        net.place(f"S{x}{x}")
        net.place(f"p{x}")
        net.place(f"bad_{x}", bad=True)
        for y in names:
            net.place(f"{x}{y}")

    for x in names:
        net.transition(f"i_{x}", [env], [f"L{x}"])
        net.transition(f"t_{x}", [f"L{x}", f"S{x}"], [f"L{x}", f"S{x}{x}"])
        net.transition(f"fa_{x}", [f"S{x}"], [f"p{x}"])
        net.transition(f"fr_{x}", [f"S{x}{x}"], [f"p{x}"])
        others = [y for y in names if y != x]
        if others:
            net.transition(
                f"info_{''.join(others)}",
                [f"S{x}{x}", *(f"S{y}" for y in others)],
                [f"p{x}", *(f"p{y}" for y in others)],
            )
        for y in names:
            net.transition(f"{x}{y}".lower(), [f"p{x}"], [f"{x}{y}"])

    for x in names:
        for y in names:
            alarm = f"{x}{y}"
            witnesses = [env]
            witnesses.extend(f"L{z}" for z in names if z != y)
            for witness in witnesses:
                net.transition(f"bot_{witness}_{alarm}", [witness, alarm], [witness, f"bad_{x}"])
    return net.build()


def concurrent_machines(m: int, k: int) -> PetriGame:
    """CM(m, k): k orders on m machines, one machine disabled by the environment.

    Order j learns which machine l failed, then picks a machine i
    (``proc<j>_<i>``). It is bad to use the failed machine or to share a
    machine with another order.
    """
    net = _Net()
    env = net.place("Env", env=True, initial=True)
    machines = range(1, m + 1)
    orders = range(1, k + 1)
    for l in machines:
        net.place(f"F{l}", env=True)
    for j in orders:
        net.place(f"O{j}", initial=True)
        net.place(f"K{j}")
        net.place(f"Bad{j}", bad=True)
        for i in machines:
            net.place(f"P{j}_{i}")

    for l in machines:
        net.transition(f"fail{l}", [env], [f"F{l}"])
    for j in orders:
        for l in machines:
            net.transition(f"learn{j}_{l}", [f"O{j}", f"F{l}"], [f"K{j}", f"F{l}"])
        for i in machines:
            net.transition(f"proc{j}_{i}", [f"K{j}"], [f"P{j}_{i}"])
            net.transition(f"broke{j}_{i}", [f"P{j}_{i}", f"F{i}"], [f"Bad{j}", f"F{i}"])
    for j1, j2 in combinations(orders, 2):
        for i in machines:
            net.transition(
                f"clash{j1}_{j2}_{i}",
                [f"P{j1}_{i}", f"P{j2}_{i}"],
                [f"Bad{j1}", f"Bad{j2}"],
            )
    return net.build()


def _tool_sets(m: int, k: int) -> list[tuple[tuple[int, int], ...]]:
    tools = [(r, u) for r in range(1, m + 1) for u in range(1, m + 1)]
    return list(combinations(tools, k))


def self_reconfiguring_robots(m: int, k: int) -> PetriGame:
    """SR(m, k): m robots with m tool types each; the environment destroys k tools.

    The environment destroys a whole set of k (robot, tool) pairs in one
    move (``destroy<s>``). Each robot learns the set (``K<r>_<s>``) and equips
    one tool type. Using a destroyed tool or equipping a type another robot
    already equips is bad.
    """
    net = _Net()
    env = net.place("Env", env=True, initial=True)
    robots = range(1, m + 1)
    types = range(1, m + 1)
    sets = _tool_sets(m, k)
    for s in range(len(sets)):
        net.place(f"D{s}", env=True)
    for r in robots:
        net.place(f"R{r}", initial=True)
        net.place(f"Bad{r}", bad=True)
        for s in range(len(sets)):
            net.place(f"K{r}_{s}")
        for u in types:
            net.place(f"E{r}_{u}")

    for s in range(len(sets)):
        net.transition(f"destroy{s}", [env], [f"D{s}"])
    for r in robots:
        for s, destroyed in enumerate(sets):
            net.transition(f"learn{r}_{s}", [f"R{r}", f"D{s}"], [f"K{r}_{s}", f"D{s}"])
            for u in types:
                net.transition(f"equip{r}_{s}_{u}", [f"K{r}_{s}"], [f"E{r}_{u}"])
            for r2, u in destroyed:
                if r2 == r:
                    net.transition(
                        f"broken{r}_{u}_{s}", [f"E{r}_{u}", f"D{s}"], [f"Bad{r}", f"D{s}"]
                    )
    for r1, r2 in combinations(robots, 2):
        for u in types:
            net.transition(
                f"clash{r1}_{r2}_{u}", [f"E{r1}_{u}", f"E{r2}_{u}"], [f"Bad{r1}", f"Bad{r2}"]
            )
    return net.build()


def _subset_name(subset: tuple[int, ...]) -> str:
    return "_".join(str(i) for i in subset)


def job_processing(m: int) -> PetriGame:
    """JP(m): a job visits processors 1..m and must be processed exactly by a chosen subset.

    The environment picks a non-empty subset (``choose_<S>``). At stage i the
    job looks the subset up (``look<i>_<S>``), ending in ``Y<i>`` if i is in
    it and ``N<i>`` otherwise, and then processes or skips. Processing
    outside the subset or skipping inside it is bad.
    """
    net = _Net()
    env = net.place("Env", env=True, initial=True)
    stages = range(1, m + 1)
    subsets = [
        subset for size in range(1, m + 1) for subset in combinations(stages, size)
    ]
    for subset in subsets:
        net.place(f"C_{_subset_name(subset)}", env=True)
    for i in stages:
        net.place(f"J{i}", initial=i == 1)
        net.place(f"Y{i}")
        net.place(f"N{i}")
    net.place("Done")
    net.place("BadJ", bad=True)

    for subset in subsets:
        net.transition(f"choose_{_subset_name(subset)}", [env], [f"C_{_subset_name(subset)}"])
    for i in stages:
        following = f"J{i + 1}" if i < m else "Done"
        for subset in subsets:
            chosen = f"C_{_subset_name(subset)}"
            member = f"Y{i}" if i in subset else f"N{i}"
            net.transition(f"look{i}_{_subset_name(subset)}", [f"J{i}", chosen], [member, chosen])
        net.transition(f"proc{i}", [f"Y{i}"], [following])
        net.transition(f"skipwrong{i}", [f"Y{i}"], ["BadJ"])
        net.transition(f"skip{i}", [f"N{i}"], [following])
        net.transition(f"procwrong{i}", [f"N{i}"], ["BadJ"])
    return net.build()


def document_workflow(m: int, simple: bool = False) -> PetriGame:
    """DW(m) / DWs(m): m clerks in a ring decide unanimously on a document.

    The environment alone picks clerk i (``give<i>``, Env -> G_i); the clerk
    then takes the document (``take<i>``), which the system can only refuse
    by deadlocking. The clerk endorses (``fy<i>``) or rejects (``fn<i>``).
    Each decision is passed to the next clerk in the ring, who follows it or
    deviates; deviating is bad. The ring stops at the clerk before the first
    one. With ``simple`` (DWs) a rejection is bad too.
    """
    net = _Net()
    env = net.place("Env", env=True, initial=True)
    clerks = range(1, m + 1)
    for i in clerks:
        net.place(f"G{i}", env=True)
        net.place(f"H{i}", env=True)
    for i in clerks:
        net.place(f"C{i}", initial=True)
        net.place(f"F{i}")
        net.place(f"Y{i}")
        net.place(f"N{i}", bad=simple)
        net.place(f"IY{i}")
        net.place(f"IN{i}")
        net.place(f"DY{i}")
        net.place(f"DN{i}")
        net.place(f"X{i}", bad=True)

    for i in clerks:
        following = i % m + 1
        net.transition(f"give{i}", [env], [f"G{i}"])
        net.transition(f"take{i}", [f"G{i}", f"C{i}"], [f"H{i}", f"F{i}"])
        net.transition(f"fy{i}", [f"F{i}"], [f"Y{i}"])
        net.transition(f"fn{i}", [f"F{i}"], [f"N{i}"])
        if following != i:
            net.transition(f"passy{i}", [f"Y{i}", f"C{following}"], [f"DY{i}", f"IY{following}"])
            net.transition(f"passn{i}", [f"N{i}", f"C{following}"], [f"DN{i}", f"IN{following}"])
        net.transition(f"foly{i}", [f"IY{i}"], [f"Y{i}"])
        net.transition(f"devy{i}", [f"IY{i}"], [f"X{i}"])
        net.transition(f"foln{i}", [f"IN{i}"], [f"N{i}"])
        net.transition(f"devn{i}", [f"IN{i}"], [f"X{i}"])
    return net.build()
