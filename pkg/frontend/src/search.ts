/* Case-insensitive substring search over annotation text.
 *
 * The corpus includes hidden annotations: a query can land inside an entry
 * the reader has never revealed, and selecting the hit is what surfaces it.
 */

export interface Searchable {
  id: string;
  title: string;
  text: string;
}

export interface SearchHit {
  id: string;
  title: string;
  snippet: string;
}

const CONTEXT = 30;

export function searchAnnotations(entries: Searchable[], query: string): SearchHit[] {
  const needle = query.toLowerCase();
  if (!needle) return [];
  const hits: SearchHit[] = [];
  for (const entry of entries) {
    const haystack = entry.title + "\n" + entry.text;
    const at = haystack.toLowerCase().indexOf(needle);
    if (at < 0) continue;
    const start = Math.max(0, at - CONTEXT);
    const end = Math.min(haystack.length, at + needle.length + CONTEXT);
    const snippet = haystack.slice(start, end).replace(/\s+/g, " ").trim();
    hits.push({ id: entry.id, title: entry.title || entry.id, snippet });
  }
  return hits;
}
