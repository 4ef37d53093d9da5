"""Collision-free rearrangement of labelled tokens sliding on a graph.

The planner is the discrete counterpart of moving distinct points along a
1-complex: tokens occupy vertices, one token slides along one edge per
step, and no two tokens may ever share a vertex.  Rearrangement into an
arbitrary target placement is possible exactly when the graph has an
*essential vertex* (degree >= 3); on paths and cycles the planner
refuses, mirroring the topological obstruction.

Strategy.  The three lexicographically smallest edges at the essential
vertex are subdivided into corridors of n slots each ("lanes", giving the
branches room for all tokens plus slack).  Planning runs in two phases on
a BFS spanning tree rooted at the junction:

1. gather: tokens whose path to the junction runs through a lane walk
   into that lane from its far side and stack up from the junction end;
   a restack pass then converts every lane into a stack fed from the
   junction, and all remaining tokens walk to the junction and push into
   the emptiest lane;
2. place, deepest goal first: the lane on the goal's root path (if any)
   is evacuated into the other lanes, tokens stacked above the moving
   token are popped aside, and the token walks through the junction to
   its goal, never to move again.

Every emitted move is validated against the occupancy invariant as it is
generated, and :func:`simulate` replays schedules independently.
"""

from __future__ import annotations

from dataclasses import dataclass


class NoEssentialVertexError(ValueError):
    """The graph is a path or a cycle: no junction, planner refuses."""


class IllegalMoveError(ValueError):
    """A schedule move uses a missing edge or a wrong source vertex."""


class CollisionDetectedError(ValueError):
    """A schedule move targets an occupied vertex."""


class PlannerStuckError(RuntimeError):
    """Lane bookkeeping wedged (cannot happen for n <= 5 tokens)."""


@dataclass(frozen=True)
class TokenGraph:
    """Undirected graph with an injective token placement.

    ``vertices``: sorted vertex labels; ``edges``: sorted (u, v) pairs
    with u < v; ``placement``: sorted (token, vertex) pairs with tokens
    numbered 1..n.
    """

    vertices: tuple
    edges: tuple
    placement: tuple

    @classmethod
    def build(cls, vertices, edges, placement) -> "TokenGraph":
        verts = sorted(set(str(v) for v in vertices))
        if any((not v) or any(ch.isspace() for ch in v) for v in verts):
            raise ValueError("vertex labels must be nonempty and whitespace-free")
        vset = set(verts)
        norm_edges = set()
        for u, w in edges:
            u, w = str(u), str(w)
            if u == w:
                raise ValueError(f"self-loop at {u!r}")
            if u not in vset or w not in vset:
                raise ValueError(f"edge ({u!r}, {w!r}) uses an unknown vertex")
            norm_edges.add((min(u, w), max(u, w)))
        if isinstance(placement, dict):
            placement = placement.items()
        place = {}
        for token, vertex in placement:
            token = int(token)
            vertex = str(vertex)
            if vertex not in vset:
                raise ValueError(f"token {token} placed on unknown vertex {vertex!r}")
            if token in place:
                raise ValueError(f"token {token} placed twice")
            place[token] = vertex
        n = len(place)
        if sorted(place) != list(range(1, n + 1)):
            raise ValueError("tokens must be numbered 1..n")
        if len(set(place.values())) != n:
            raise ValueError("placement is not injective")
        if n >= len(verts):
            raise ValueError("need strictly fewer tokens than vertices")
        graph = cls(
            vertices=tuple(verts),
            edges=tuple(sorted(norm_edges)),
            placement=tuple(sorted(place.items())),
        )
        if not graph.is_connected():
            raise ValueError("graph must be connected")
        return graph

    @property
    def n_tokens(self) -> int:
        return len(self.placement)

    def adjacency(self):
        adj = {v: [] for v in self.vertices}
        for u, w in self.edges:
            adj[u].append(w)
            adj[w].append(u)
        for v in adj:
            adj[v].sort()
        return adj

    def placement_dict(self):
        return dict(self.placement)

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        adj = self.adjacency()
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def degree(self, v) -> int:
        return sum(1 for u, w in self.edges if v in (u, w))


@dataclass(frozen=True)
class Move:
    token: int
    source: str
    target: str


@dataclass(frozen=True)
class MoveSchedule:
    moves: tuple

    def __len__(self):
        return len(self.moves)

    def to_lines(self):
        return [f"{m.token} {m.source} {m.target}" for m in self.moves]


@dataclass(frozen=True)
class Junction:
    """Essential vertex with its three lane corridors on the prepared graph.

    ``lanes[k]`` lists the corridor slots of one subdivided junction
    edge, nearest the junction first.
    """

    vertex: str
    graph: TokenGraph
    lanes: tuple


@dataclass(frozen=True)
class PlanResult:
    schedule: MoveSchedule
    graph: TokenGraph
    junction: str
    poly_bound: int


def validate_graph(g: TokenGraph) -> Junction:
    """Locate an essential vertex and prepare lane corridors.

    Raises :class:`NoEssentialVertexError` when the graph is a path or a
    cycle (connected with maximal degree <= 2).  The three smallest edges
    at the junction are each subdivided into n+1 segments, so at least
    n+2 vertices lie on the three branches.
    """
    essential = [v for v in g.vertices if g.degree(v) >= 3]
    if not essential:
        raise NoEssentialVertexError(
            "graph is a path or cycle: token rearrangement is obstructed"
        )
    junction = min(essential)
    adj = g.adjacency()
    heads = adj[junction][:3]
    n = max(1, g.n_tokens)

    vset = set(g.vertices)
    edges = set(g.edges)
    lanes = []
    new_vertices = []
    for head in heads:
        edges.discard((min(junction, head), max(junction, head)))
        slots = []
        for k in range(1, n + 1):
            label = f"{junction}~{head}~{k}"
            while label in vset:
                label = "_" + label
            vset.add(label)
            slots.append(label)
            new_vertices.append(label)
        chain = [junction] + slots + [head]
        for a, b in zip(chain, chain[1:]):
            edges.add((min(a, b), max(a, b)))
        lanes.append(tuple(slots))
    prepared = TokenGraph(
        vertices=tuple(sorted(vset)),
        edges=tuple(sorted(edges)),
        placement=g.placement,
    )
    return Junction(vertex=junction, graph=prepared, lanes=tuple(lanes))


def simulate(g: TokenGraph, schedule: MoveSchedule):
    """Replay a schedule, enforcing the occupancy invariants.

    Returns the final placement as a dict token -> vertex.
    """
    edges = set(g.edges)
    pos = g.placement_dict()
    occupied = {v: t for t, v in pos.items()}
    for move in schedule.moves:
        token, src, dst = move.token, move.source, move.target
        if pos.get(token) != src:
            raise IllegalMoveError(
                f"token {token} is at {pos.get(token)!r}, not {src!r}"
            )
        if (min(src, dst), max(src, dst)) not in edges:
            raise IllegalMoveError(f"no edge between {src!r} and {dst!r}")
        if dst in occupied:
            raise CollisionDetectedError(
                f"token {token} would collide with token {occupied[dst]} on {dst!r}"
            )
        del occupied[src]
        occupied[dst] = token
        pos[token] = dst
    return pos


class _Planner:
    def __init__(self, junction_info: Junction, goal: dict):
        self.info = junction_info
        self.graph = junction_info.graph
        self.junction = junction_info.vertex
        self.lanes = junction_info.lanes
        self.goal = goal
        self.adj = self.graph.adjacency()
        self.pos = self.graph.placement_dict()
        self.occupied = {v: t for t, v in self.pos.items()}
        self.moves = []
        self.parent, self.depth = self._bfs_tree()
        self.lane_of_slot = {}
        for idx, lane in enumerate(self.lanes):
            for slot in lane:
                self.lane_of_slot[slot] = idx

    def _bfs_tree(self):
        parent = {self.junction: None}
        depth = {self.junction: 0}
        frontier = [self.junction]
        while frontier:
            nxt = []
            for v in frontier:
                for w in self.adj[v]:
                    if w not in parent:
                        parent[w] = v
                        depth[w] = depth[v] + 1
                        nxt.append(w)
            frontier = nxt
        return parent, depth

    # -- elementary moves -------------------------------------------------

    def _step(self, token, dst):
        src = self.pos[token]
        if dst in self.occupied:
            raise PlannerStuckError(f"internal: step onto occupied {dst!r}")
        self.moves.append(Move(token, src, dst))
        del self.occupied[src]
        self.occupied[dst] = token
        self.pos[token] = dst

    def _walk(self, token, path):
        for dst in path:
            self._step(token, dst)

    def _root_path(self, v):
        """Path v -> junction, excluding v itself."""
        out = []
        while v != self.junction:
            v = self.parent[v]
            out.append(v)
        return out

    def _down_path(self, v):
        """Path junction -> v, excluding the junction."""
        return list(reversed([v] + self._root_path(v)))[1:]

    def _child_toward(self, v):
        """The junction's child on the root path of v (None for v = junction)."""
        if v == self.junction:
            return None
        prev = v
        for anc in self._root_path(v):
            if anc == self.junction:
                return prev
            prev = anc
        return prev

    # -- lane bookkeeping --------------------------------------------------

    def _lane_tokens(self, idx):
        """Tokens inside lane idx, nearest the junction first."""
        return [
            self.occupied[slot] for slot in self.lanes[idx] if slot in self.occupied
        ]

    def _lane_free(self, idx):
        return sum(1 for slot in self.lanes[idx] if slot not in self.occupied)

    def _lane_is_junction_stack(self, idx):
        """True when occupied slots form a suffix (deep end) of the lane."""
        seen_token = False
        for slot in self.lanes[idx]:
            if slot in self.occupied:
                seen_token = True
            elif seen_token:
                return False
        return True

    def _push_into_lane(self, token, idx):
        """Walk a token at the junction into lane idx, stopping above the stack."""
        lane = self.lanes[idx]
        path = []
        for slot in lane:
            if slot in self.occupied:
                break
            path.append(slot)
        if not path:
            raise PlannerStuckError(f"lane {idx} cannot accept a push")
        self._walk(token, path)

    def _pop_from_lane(self, token):
        """Walk a lane token up to the junction."""
        slot = self.pos[token]
        idx = self.lane_of_slot[slot]
        lane = self.lanes[idx]
        k = lane.index(slot)
        path = list(reversed(lane[:k])) + [self.junction]
        self._walk(token, path)

    def _emptiest_lane(self, exclude=()):
        best = None
        for idx in range(len(self.lanes)):
            if idx in exclude:
                continue
            free = self._lane_free(idx)
            if free == 0:
                continue
            if best is None or free > self._lane_free(best):
                best = idx
        if best is None:
            raise PlannerStuckError("no lane can accept a token")
        return best

    # -- phase 1: gather ---------------------------------------------------

    def _gather(self):
        lane_heads = {}
        for idx, lane in enumerate(self.lanes):
            # the original vertex at the far end of the lane corridor
            far = [w for w in self.adj[lane[-1]] if w != (lane[-2] if len(lane) > 1 else self.junction)]
            lane_heads[idx] = far[0] if far else None

        # a token resting on the junction plugs everything: shelve it first
        if self.junction in self.occupied:
            token = self.occupied[self.junction]
            idx = min(
                range(len(self.lanes)),
                key=lambda k: (len(self._dwellers(k)), k),
            )
            self._step(token, self.lanes[idx][0])

        # far-side dwellers stack shallow-first into their own lane
        for idx in range(len(self.lanes)):
            for token in self._dwellers(idx):
                self._park_dweller(token, idx)

        self._restack_lanes()

        # everyone else walks to the junction and pushes in
        rest = [
            t
            for t in sorted(self.pos)
            if self.pos[t] not in self.lane_of_slot
        ]
        rest.sort(key=lambda t: (self.depth[self.pos[t]], self.pos[t], t))
        for token in rest:
            path = self._root_path(self.pos[token])
            self._walk(token, path)
            self._push_into_lane(token, self._emptiest_lane())

    def _dwellers(self, idx):
        """Tokens whose root path runs through lane idx, nearest first."""
        out = []
        for token, vertex in sorted(self.pos.items()):
            if vertex in self.lane_of_slot:
                continue
            if vertex == self.junction:
                continue
            child = self._child_toward(vertex)
            if child == self.lanes[idx][0]:
                out.append(token)
        out.sort(key=lambda t: (self.depth[self.pos[t]], self.pos[t], t))
        return out

    def _park_dweller(self, token, idx):
        """Walk a beyond-lane token into its own lane from the far side."""
        lane = self.lanes[idx]
        up = [self.pos[token]] + self._root_path(self.pos[token])
        # truncate at the first free lane slot reached from the far end
        path = []
        for v in up[1:]:
            if v in self.lane_of_slot and v in self.occupied:
                break
            if v == self.junction:
                break
            path.append(v)
        # path now ends at the shallowest free slot above the stack
        while path and path[-1] not in self.lane_of_slot:
            path.pop()
        if not path or path[-1] not in self.lane_of_slot:
            raise PlannerStuckError(f"dweller {token} found no lane slot")
        self._walk(token, path)

    def _restack_lanes(self):
        """Convert every lane into a stack fed from the junction side."""
        while True:
            shallow = [
                idx
                for idx in range(len(self.lanes))
                if self._lane_tokens(idx) and not self._lane_is_junction_stack(idx)
            ]
            if not shallow:
                return
            # lanes usable as push targets right now
            deep = [
                idx
                for idx in range(len(self.lanes))
                if idx not in shallow and self._lane_free(idx) > 0
            ]
            single = [idx for idx in shallow if len(self._lane_tokens(idx)) == 1]
            if single:
                idx = single[0]
                token = self._lane_tokens(idx)[0]
                self._pop_from_lane(token)
                self._push_into_lane(token, idx)
            elif deep:
                idx = shallow[0]
                token = self._lane_tokens(idx)[0]
                self._pop_from_lane(token)
                self._push_into_lane(token, deep[0])
            else:
                raise PlannerStuckError(
                    "all lanes are far-anchored with 2+ tokens "
                    "(requires 6+ tokens); rearrangement bookkeeping wedged"
                )

    # -- phase 2: place ----------------------------------------------------

    def _place_all(self):
        order = sorted(
            self.goal,
            key=lambda t: (-self.depth[self.goal[t]], self.goal[t], t),
        )
        finalized = set()
        for token in order:
            self._place(token, finalized)
            finalized.add(token)

    def _place(self, token, finalized):
        t = self.goal[token]
        lane_on_path = None
        child = self._child_toward(t)
        for idx in range(len(self.lanes)):
            if child == self.lanes[idx][0]:
                lane_on_path = idx
                break
        if lane_on_path is not None:
            # clear the lane the walk must cross
            for other in list(self._lane_tokens(lane_on_path)):
                self._pop_from_lane(other)
                self._push_into_lane(other, self._emptiest_lane(exclude=(lane_on_path,)))
        # pop tokens stacked above the moving one
        slot = self.pos[token]
        idx = self.lane_of_slot[slot]
        lane = self.lanes[idx]
        k = lane.index(slot)
        exclude = {idx}
        if lane_on_path is not None:
            exclude.add(lane_on_path)
        for s in lane[:k]:
            if s in self.occupied:
                other = self.occupied[s]
                self._pop_from_lane(other)
                self._push_into_lane(other, self._emptiest_lane(exclude=tuple(exclude)))
        self._pop_from_lane(token)
        self._walk(token, self._down_path(t))


def plan(g: TokenGraph, goal) -> PlanResult:
    """Schedule collision-free slides taking the placement to ``goal``.

    ``goal`` maps each token to its target vertex (injective, original
    vertices).  The returned schedule acts on the prepared (subdivided)
    graph in the result, which carries the same original vertices and
    the same initial placement.
    """
    if isinstance(goal, dict):
        goal_map = {int(t): str(v) for t, v in goal.items()}
    else:
        goal_map = {int(t): str(v) for t, v in goal}
    start = g.placement_dict()
    if sorted(goal_map) != sorted(start):
        raise ValueError("goal must mention exactly the placed tokens")
    if len(set(goal_map.values())) != len(goal_map):
        raise ValueError("goal placement is not injective")
    unknown = [v for v in goal_map.values() if v not in set(g.vertices)]
    if unknown:
        raise ValueError(f"goal uses unknown vertices: {unknown}")

    info = validate_graph(g)
    if goal_map == start:
        return PlanResult(
            schedule=MoveSchedule(moves=()),
            graph=info.graph,
            junction=info.vertex,
            poly_bound=0,
        )
    planner = _Planner(info, goal_map)
    planner._gather()
    planner._place_all()
    n = g.n_tokens
    v_count = len(info.graph.vertices)
    bound = 4 * (n + 1) * (n + 2) * v_count
    if len(planner.moves) > bound:
        raise AssertionError(
            f"schedule length {len(planner.moves)} exceeded the bound {bound}"
        )
    final = {t: planner.pos[t] for t in goal_map}
    if final != goal_map:
        raise PlannerStuckError("planner terminated off-goal")
    return PlanResult(
        schedule=MoveSchedule(moves=tuple(planner.moves)),
        graph=info.graph,
        junction=info.vertex,
        poly_bound=bound,
    )
