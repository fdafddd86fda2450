"""
osmoflow - DOT export of LDT graphs

Shape mapping:
  section                -> ellipse
  logical resource       -> triangle (filled when interactive)
  concrete graph         -> solid box cluster
  virtual graph          -> bold box cluster around its instantiating graph
  starting point         -> small open circle
  simulation outcome     -> filled bullet
Causal edges are green, coupling edges green with arrows on both ends,
applies_to edges blue, access edges point from data source to destination.
"""

from typing import List

from workflow.model import GraphKind, SimulationWorkflow


def _q(name: str) -> str:
    return '"' + name.replace('"', '\\"') + '"'


class DotExporter:
    """Deterministic DOT text for one workflow"""

    def __init__(self, wf: SimulationWorkflow):
        self.wf = wf
        self.lines: List[str] = []
        self.drawn_graphs = set()

    def _emit(self, text: str, depth: int = 1):
        self.lines.append('  ' * depth + text)

    def _anchor(self, graph_id: str) -> str:
        """Drawable DOT node standing for a graph in edges"""
        g = self.wf.graphs.get(graph_id)
        if g is not None and g.is_node and g.contained:
            return g.contained[0]
        return f"anchor_{graph_id}"

    def _cluster_attr(self, graph_id: str) -> str:
        g = self.wf.graphs.get(graph_id)
        if g is None or g.is_node:
            return ''
        return f', lhead={_q("cluster_" + graph_id)}'

    def _draw_entity(self, entity: str, depth: int):
        wf = self.wf
        if entity in wf.sections:
            kind = wf.sections[entity].kind.value
            self._emit(f'{_q(entity)} [shape=ellipse, label={_q(entity)}, tooltip={_q(kind)}];', depth)
        elif entity in wf.resources:
            style = ', style=filled, fillcolor=green' if wf.resources[entity].interactive else ''
            self._emit(f'{_q(entity)} [shape=triangle, label={_q(entity)}{style}];', depth)
        elif entity in wf.graphs:
            self._draw_graph(entity, depth)

    def _draw_graph(self, graph_id: str, depth: int):
        g = self.wf.graphs[graph_id]
        if graph_id in self.drawn_graphs:
            return
        self.drawn_graphs.add(graph_id)
        if g.is_node:
            for entity in g.contained:
                self._draw_entity(entity, depth)
            return

        style = 'bold' if g.kind == GraphKind.VIRTUAL else 'solid'
        label = graph_id
        if g.kind == GraphKind.VIRTUAL and g.multiplicity:
            label += f" ({g.multiplicity.value})"
        self._emit(f'subgraph {_q("cluster_" + graph_id)} {{', depth)
        self._emit(f'label={_q(label)}; shape=box; style={style};', depth + 1)
        self._emit(f'{_q("anchor_" + graph_id)} [shape=plaintext, label="", width=0, height=0];', depth + 1)
        for entity in sorted(g.contained):
            self._draw_entity(entity, depth + 1)
        if g.instantiated_by:
            self._draw_graph(g.instantiated_by, depth + 1)
        self._emit('}', depth)

    def render(self) -> str:
        wf = self.wf
        self.lines = [f'digraph {_q(wf.name)} {{', '  compound=true;', '  rankdir=LR;']

        contained = {e for g in wf.graphs.values() for e in g.contained}
        instantiating = {g.instantiated_by for g in wf.graphs.values() if g.instantiated_by}
        for gid in sorted(wf.graphs):
            if gid not in contained and gid not in instantiating:
                self._draw_graph(gid, 1)
        for gid in sorted(instantiating - self.drawn_graphs):
            if gid in wf.graphs:
                self._draw_graph(gid, 1)
        for entity in sorted(set(wf.sections) | set(wf.resources)):
            if entity not in contained:
                self._draw_entity(entity, 1)

        # Points
        for gid in sorted(wf.graphs):
            for node in sorted(wf.graphs[gid].starting_points):
                bullet = f"start_{gid}_{node}"
                self._emit(f'{_q(bullet)} [shape=circle, label="", width=0.15, color=green];')
                self._emit(f'{_q(bullet)} -> {_q(self._anchor(node))} [color=green];')
        for node in sorted(wf.simulation_outcome):
            bullet = f"outcome_{node}"
            self._emit(f'{_q(bullet)} [shape=point, style=filled, width=0.15, color=green];')
            self._emit(f'{_q(self._anchor(node))} -> {_q(bullet)} [color=green];')

        # Edges
        for a, b in sorted(wf.causal_edges):
            attrs = 'color=green' + self._cluster_attr(b)
            self._emit(f'{_q(self._anchor(a))} -> {_q(self._anchor(b))} [{attrs}];')
        for a, b in sorted(wf.coupling_edges):
            if a < b:
                self._emit(f'{_q(self._anchor(a))} -> {_q(self._anchor(b))} [color=green, dir=both];')
        for section, target in sorted(wf.applies_to):
            attrs = 'color=blue' + self._cluster_attr(target)
            self._emit(f'{_q(section)} -> {_q(self._anchor(target))} [{attrs}];')
        for aid in sorted(wf.accesses):
            acc = wf.accesses[aid]
            read_flags = [n for n in ('reads_initially', 'reads_parameters', 'reads_during_execution') if getattr(acc, n)]
            write_flags = [n for n in ('writes_finally', 'writes_during_execution') if getattr(acc, n)]
            if write_flags:
                self._emit(f'{_q(acc.access_point)} -> {_q(acc.resource)} '
                           f'[label={_q(",".join(_abbrev(f) for f in write_flags))}];')
            if read_flags:
                self._emit(f'{_q(acc.resource)} -> {_q(acc.access_point)} '
                           f'[label={_q(",".join(_abbrev(f) for f in read_flags))}];')

        self.lines.append('}')
        return '\n'.join(self.lines) + '\n'


FLAG_LABELS = {
    'reads_initially': 'r_init',
    'reads_parameters': 'r_param',
    'writes_finally': 'w_fin',
    'reads_during_execution': 'r_exec',
    'writes_during_execution': 'w_exec',
}


def _abbrev(flag: str) -> str:
    return FLAG_LABELS[flag]


def to_dot(wf: SimulationWorkflow) -> str:
    return DotExporter(wf).render()
