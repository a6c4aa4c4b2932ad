import init, { translate, synth, sat } from './pkg/ltlf_synth_web.js';

const $ = (id) => document.getElementById(id);
const SVG = 'http://www.w3.org/2000/svg';

function reset() {
  for (const id of ['verdict', 'error', 'details', 'dot']) $(id).textContent = '';
  $('verdict').className = '';
  for (const id of ['details', 'graph', 'dotbox']) $(id).hidden = true;
}

function fail(e) {
  $('error').textContent = String(e.message || e);
}

// Only the subset of DOT the solver emits: `id [label="..."]` and
// `a -> b [label="...", style=bold]`.
function parseDot(text) {
  const nodes = new Map();
  const edges = new Map();
  const unquote = (s) => s.replace(/\\"/g, '"').replace(/\\\\/g, '\\');
  for (const line of text.split('\n')) {
    let m = line.match(/^\s*(\w+)\s*->\s*(\w+)\s*(?:\[(.*)\])?;/);
    if (m) {
      const [, from, to, attrs = ''] = m;
      for (const id of [from, to]) if (!nodes.has(id)) nodes.set(id, id);
      const label = (attrs.match(/label="((?:[^"\\]|\\.)*)"/) || [, ''])[1];
      const bold = /style=bold/.test(attrs);
      const key = `${from}|${to}|${bold}`;
      if (!edges.has(key)) edges.set(key, { from, to, bold, labels: [] });
      if (label) edges.get(key).labels.push(unquote(label));
      continue;
    }
    m = line.match(/^\s*(\w+)\s*\[(.*)\];/);
    if (m && !['node', 'edge', 'graph'].includes(m[1])) {
      const label = (m[2].match(/label="((?:[^"\\]|\\.)*)"/) || [, m[1]])[1];
      nodes.set(m[1], /shape=point/.test(m[2]) ? '' : unquote(label));
    }
  }
  return { nodes, edges: [...edges.values()] };
}

function el(tag, attrs, text) {
  const e = document.createElementNS(SVG, tag);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  if (text !== undefined) e.textContent = text;
  return e;
}

const clip = (s, n) => (s.length > n ? s.slice(0, n - 1) + '…' : s);

function draw(dotText) {
  const svg = $('graph');
  svg.replaceChildren();
  svg.appendChild(el('defs', {})).appendChild(
    el('marker', { id: 'arrow', viewBox: '0 0 10 10', refX: 10, refY: 5, markerWidth: 7, markerHeight: 7, orient: 'auto' })
  ).appendChild(el('path', { d: 'M0,0 L10,5 L0,10 z', fill: '#555' }));

  const { nodes, edges } = parseDot(dotText);
  const ids = [...nodes.keys()];
  const W = 900, H = 480, R = 22;
  const pos = new Map();
  ids.forEach((id, i) => {
    const a = (2 * Math.PI * i) / ids.length - Math.PI / 2;
    const r = ids.length === 1 ? 0 : Math.min(W, H) / 2 - 60;
    pos.set(id, [W / 2 + r * Math.cos(a) * 1.6, H / 2 + r * Math.sin(a)]);
  });

  for (const e of edges) {
    const [x1, y1] = pos.get(e.from);
    const [x2, y2] = pos.get(e.to);
    const color = e.bold ? '#1a7f37' : '#555';
    const label = clip(e.labels.join(' | '), 40);
    let d, lx, ly;
    if (e.from === e.to) {
      d = `M${x1 - 8},${y1 - R} C${x1 - 30},${y1 - 70} ${x1 + 30},${y1 - 70} ${x1 + 8},${y1 - R}`;
      [lx, ly] = [x1, y1 - 62];
    } else {
      const dx = x2 - x1, dy = y2 - y1, len = Math.hypot(dx, dy);
      const [ux, uy] = [dx / len, dy / len];
      const [sx, sy, tx, ty] = [x1 + ux * R, y1 + uy * R, x2 - ux * R, y2 - uy * R];
      // bend so that a -> b and b -> a do not overlap
      const [cx, cy] = [(sx + tx) / 2 - uy * 30, (sy + ty) / 2 + ux * 30];
      d = `M${sx},${sy} Q${cx},${cy} ${tx},${ty}`;
      [lx, ly] = [cx, cy];
    }
    svg.appendChild(el('path', { d, fill: 'none', stroke: color, 'stroke-width': e.bold ? 2 : 1, 'marker-end': 'url(#arrow)' }));
    const t = el('text', { x: lx, y: ly, 'text-anchor': 'middle', fill: color }, label);
    t.appendChild(el('title', {}, e.labels.join('\n')));
    svg.appendChild(t);
  }

  for (const id of ids) {
    const [x, y] = pos.get(id);
    const label = nodes.get(id);
    if (label === '' && id === 'init') {
      svg.appendChild(el('circle', { cx: x, cy: y, r: 4, fill: '#222' }));
      continue;
    }
    const g = svg.appendChild(el('g', {}));
    g.appendChild(el('circle', { cx: x, cy: y, r: R, fill: id === 'acc' ? '#d8f5df' : '#fff', stroke: '#222' }));
    g.appendChild(el('text', { x, y: y + 4, 'text-anchor': 'middle' }, id));
    g.appendChild(el('text', { x, y: y + R + 13, 'text-anchor': 'middle', fill: '#666' }, clip(label, 28)));
    g.appendChild(el('title', {}, label));
  }
  svg.hidden = false;
  $('dot').textContent = dotText;
  $('dotbox').hidden = false;
}

function onSynth() {
  reset();
  try {
    const r = JSON.parse(synth($('formula').value, $('inputs').value, $('outputs').value,
      $('type').value, $('m').checked, $('e').checked));
    const ok = r.status === 'Realizable';
    $('verdict').textContent = ok ? 'REALIZABLE' : 'UNREALIZABLE';
    $('verdict').className = ok ? 'ok' : 'bad';
    const s = r.stats;
    let details = `states expanded: ${s.states_expanded}, SCCs: ${s.sccs}, SAT calls: ${s.sat_calls}, ` +
      `entailment checks: ${s.entailment_calls}, time: ${s.time_ms} ms`;
    if (r.strategy) details += '\n\n' + r.strategy;
    $('details').textContent = details;
    $('details').hidden = false;
    if (r.strategy_dot) draw(r.strategy_dot);
  } catch (e) { fail(e); }
}

function onTranslate() {
  reset();
  try {
    const r = JSON.parse(translate($('formula').value));
    $('verdict').textContent = `${r.states} states`;
    draw(r.dot);
  } catch (e) { fail(e); }
}

function onSat() {
  reset();
  try {
    const r = JSON.parse(sat($('formula').value));
    $('verdict').textContent = r.sat ? 'SAT' : 'UNSAT';
    $('verdict').className = r.sat ? 'ok' : 'bad';
    if (r.sat) {
      $('details').textContent = r.model.map((l, i) => `${i}: ${l}`).join('\n');
      $('details').hidden = false;
    }
  } catch (e) { fail(e); }
}

await init();
$('synth').onclick = onSynth;
$('translate').onclick = onTranslate;
$('sat').onclick = onSat;
