// Response payload shapes of the compatkg HTTP API (schema_version 1).

export interface NodeRef {
  component: string;
  layer: string;
  version: string;
}

export interface EndpointRef {
  component: string;
  version: string;
}

export interface EvidenceObj {
  post_id: number;
  votes: number;
  label: string;
}

export interface LinkObj {
  a: EndpointRef;
  b: EndpointRef;
  n_compatible: number;
  n_incompatible: number;
  confidence: number;
  evidence: EvidenceObj[];
}

export interface GraphPayload {
  schema_version: number;
  format_version?: number;
  nodes: NodeRef[];
  links: LinkObj[];
}

export interface SubgraphObj {
  nodes: NodeRef[];
  links: LinkObj[];
  focus: NodeRef[];
}

export interface QueryPayload {
  schema_version: number;
  query: {
    kind: "pair" | "versioned_component" | "component";
    raw: string;
    operands: { component: string; version: string | null }[];
  };
  verdict: string | null;
  confidence: number | null;
  message: string;
  subgraph: SubgraphObj;
}

export interface ComponentStatsObj {
  component: string;
  keywords: string[];
  license: string;
  dependencies: string[];
  homepage: string;
}

export interface ComponentPayload {
  schema_version: number;
  component: string;
  layer: string;
  aliases: string[];
  stats: ComponentStatsObj | null;
  versions: string[];
}

export interface PostRefObj {
  post_id: number;
  title: string;
  url: string;
  votes: number;
}

export interface RelationPayload {
  schema_version: number;
  relation: LinkObj;
  label: string;
  posts: PostRefObj[];
}

export interface LayerTopObj {
  layer: string;
  top: { component: string; relations: number }[];
}

export interface StatsPayload {
  schema_version: number;
  layers: LayerTopObj[];
}

export interface ApiErrorObj {
  code: string;
  message: string;
}

export const nodeKey = (n: { component: string; version: string }): string =>
  `${n.component}@${n.version}`;

export const linkKey = (l: LinkObj): string => `${nodeKey(l.a)}--${nodeKey(l.b)}`;
