#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "html_render.hpp"
#include "lodstory/detail/text.hpp"
#include "lodstory/error.hpp"
#include "lodstory/html_sanitizer.hpp"
#include "lodstory/payload_json.hpp"
#include "lodstory/version.hpp"

namespace lodstory::html {

namespace {

using detail::format_number;
using detail::html_escape;

constexpr std::string_view kStyle = R"css(
body{font-family:Georgia,serif;max-width:60rem;margin:0 auto;padding:1rem 1.5rem;color:#222;line-height:1.5}
header h1{margin-bottom:.2rem}
.subtitle{font-size:1.2rem;color:#555;margin-top:0}
.endpoint{font-family:monospace;font-size:.8rem;color:#666}
.component{margin:2rem 0}
.card{display:inline-block;border:1px solid #ccc;border-radius:6px;padding:1rem 2rem;text-align:center}
.card-value{display:block;font-size:2.5rem;font-weight:bold}
.card-label{display:block;color:#555}
table.results{border-collapse:collapse;width:100%;font-size:.9rem}
table.results th,table.results td{border:1px solid #ddd;padding:.3rem .5rem;text-align:left;vertical-align:top}
table.results img{max-width:12rem}
details.query pre{background:#f6f6f6;padding:.6rem;overflow:auto;font-size:.8rem}
.map{display:flex;gap:1rem;align-items:flex-start}
.map aside{min-width:10rem;font-size:.85rem}
.map svg circle.point{cursor:pointer}
.notes{color:#a60;font-size:.8rem}
form.search input{padding:.3rem;width:20rem}
button.action{margin-left:.4rem;font-size:.75rem}
)css";

// Browser-side counterpart of the templating and rendering code, used for
// text search, actions, map filters and live mode. Must never contain a
// closing script tag.
constexpr std::string_view kScript = R"js(
(function(){
"use strict";
var ACCEPT="application/sparql-results+json";
function literal(v){return '"'+v.replace(/\\/g,"\\\\").replace(/"/g,'\\"').replace(/\n/g,"\\n").replace(/\r/g,"\\r").replace(/\t/g,"\\t").replace(/\x08/g,"\\b").replace(/\f/g,"\\f")+'"';}
function isIri(v){return /^https?:\/\/[^\u0000- <>"{}|^`\\]+$/.test(v);}
function term(v,mode){if(v.indexOf("\u0000")>=0)throw new Error("value contains NUL");if(mode==="iri"||(mode!=="literal"&&isIri(v)))return "<"+v+">";return literal(v);}
function instantiate(tpl,token,v,mode){return tpl.replace(new RegExp("\\"+token+"(?![A-Za-z0-9_])","g"),function(){return term(v,mode);});}
function run(endpoint,query){
  var url=endpoint+(endpoint.indexOf("?")<0?"?":"&")+"query="+encodeURIComponent(query);
  return fetch(url,{headers:{"Accept":ACCEPT}}).then(function(r){if(!r.ok)throw new Error("HTTP "+r.status);return r.json();});
}
function el(tag,attrs,text){var e=document.createElement(tag);if(attrs)for(var k in attrs)e.setAttribute(k,attrs[k]);if(text!=null)e.textContent=text;return e;}
function cellNode(b){
  if(!b)return document.createTextNode("");
  var v=b.value,low=v.toLowerCase().split(/[?#]/)[0];
  if(b.type==="uri"||/^https?:\/\//.test(v)){
    if(/\.(mp3|wav|ogg)$/.test(low)){var a=el("audio",{controls:"",src:v});return a;}
    if(/\.(mp4|webm)$/.test(low)){return el("video",{controls:"",src:v});}
    if(/\.(png|jpe?g|gif|svg)$/.test(low)){return el("img",{src:v,alt:""});}
    return el("a",{href:v},v);
  }
  return document.createTextNode(v);
}
function actionsFor(id){return Array.prototype.slice.call(document.querySelectorAll('section[data-type="action"]')).filter(function(s){return s.getAttribute("data-source")===id;});}
function renderTable(section,json){
  var box=section.querySelector(".results");box.textContent="";
  var vars=json.head.vars,rows=json.results.bindings;
  var actions=actionsFor(section.id);
  var t=el("table",{"class":"results"}),thead=el("thead"),tr=el("tr");
  vars.forEach(function(v){tr.appendChild(el("th",null,v));});thead.appendChild(tr);t.appendChild(thead);
  var tbody=el("tbody");
  rows.forEach(function(row){
    var r=el("tr");
    vars.forEach(function(v){
      var td=el("td");td.appendChild(cellNode(row[v]));
      actions.forEach(function(a){
        if(row[v]&&a.getAttribute("data-column")===v){
          var btn=el("button",{"class":"action",type:"button"},a.getAttribute("data-label"));
          btn.addEventListener("click",function(){runAction(a,row[v]);});td.appendChild(btn);
        }
      });
      r.appendChild(td);
    });
    tbody.appendChild(r);
  });
  t.appendChild(tbody);box.appendChild(t);
  if(rows.length===0)box.appendChild(el("p",{"class":"empty"},"No results."));
}
function fail(section,err){var box=section.querySelector(".results");box.textContent="";box.appendChild(el("p",{"class":"notes"},String(err)));}
function runAction(section,binding){
  var mode=binding.type==="uri"?"iri":"literal";
  var q;try{q=instantiate(section.getAttribute("data-template"),"$VALUE",binding.value,mode);}catch(e){fail(section,e);return;}
  run(section.getAttribute("data-endpoint"),q).then(function(j){renderTable(section,j);},function(e){fail(section,e);});
}
Array.prototype.forEach.call(document.querySelectorAll('section[data-type="text_search"]'),function(section){
  var form=section.querySelector("form");
  form.addEventListener("submit",function(ev){
    ev.preventDefault();
    var v=form.querySelector("input").value,q;
    try{q=instantiate(section.getAttribute("data-template"),"$SEARCH",v,"auto");}catch(e){fail(section,e);return;}
    run(section.getAttribute("data-endpoint"),q).then(function(j){renderTable(section,j);},function(e){fail(section,e);});
  });
});
Array.prototype.forEach.call(document.querySelectorAll(".map"),function(map){
  var boxes=map.querySelectorAll("input[data-facet]");
  function apply(){
    var off={};
    Array.prototype.forEach.call(boxes,function(b){if(!b.checked)(off[b.getAttribute("data-facet")]=off[b.getAttribute("data-facet")]||{})[b.value]=1;});
    Array.prototype.forEach.call(map.querySelectorAll("circle.point"),function(c){
      var f=JSON.parse(c.getAttribute("data-facets")||"{}"),hide=false;
      for(var k in off){if(f[k]!==undefined&&off[k][f[k]])hide=true;}
      c.style.display=hide?"none":"";
    });
  }
  Array.prototype.forEach.call(boxes,function(b){b.addEventListener("change",apply);});
  var meta=map.querySelector(".metadata");
  Array.prototype.forEach.call(map.querySelectorAll("circle.point"),function(c){
    c.addEventListener("click",function(){
      var m=JSON.parse(c.getAttribute("data-meta")||"{}");meta.textContent="";
      var dl=el("dl");for(var k in m){dl.appendChild(el("dt",null,k));dl.appendChild(el("dd",null,m[k]));}
      meta.appendChild(dl);
    });
  });
});
Array.prototype.forEach.call(document.querySelectorAll("section[data-live]"),function(section){
  var type=section.getAttribute("data-type");
  run(section.getAttribute("data-endpoint"),section.getAttribute("data-query")).then(function(j){
    var rows=j.results.bindings,vars=j.head.vars,box=section.querySelector(".results");
    if(type==="counter"){
      box.textContent="";var v=rows.length&&rows[0][vars[0]]?rows[0][vars[0]].value:"?";
      var card=el("div",{"class":"card"});card.appendChild(el("span",{"class":"card-value"},v));
      card.appendChild(el("span",{"class":"card-label"},section.getAttribute("data-label")));box.appendChild(card);
    }else{renderTable(section,j);}
  },function(e){fail(section,e);});
});
})();
)js";

std::string attr(std::string_view name, std::string_view value) {
  return " " + std::string(name) + "=\"" + html_escape(value) + "\"";
}

// JSON inside a script element must not be able to close it.
std::string script_safe_json(const std::string& json) {
  std::string out;
  out.reserve(json.size());
  for (std::size_t i = 0; i < json.size(); ++i) {
    if (json[i] == '<' && i + 1 < json.size() && json[i + 1] == '/') {
      out += "<\\/";
      ++i;
    } else {
      out.push_back(json[i]);
    }
  }
  return out;
}

std::string query_block(std::string_view query, std::string_view summary = "View query") {
  return "<details class=\"query\"><summary>" + html_escape(summary) +
         "</summary><pre><code>" + html_escape(query) + "</code></pre></details>";
}

std::string notes_block(const std::vector<std::string>& notes) {
  if (notes.empty()) return {};
  std::string out = "<ul class=\"notes\">";
  for (const auto& n : notes) out += "<li>" + html_escape(n) + "</li>";
  return out + "</ul>";
}

std::string cell_html(const std::optional<TypedCell>& cell) {
  if (!cell) return {};
  return std::visit(
      [&](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, render::Number>) {
          return html_escape(cell->raw.value);
        } else if constexpr (std::is_same_v<T, render::Link>) {
          return "<a" + attr("href", r.url) + ">" + html_escape(r.label.value_or(r.url)) +
                 "</a>";
        } else if constexpr (std::is_same_v<T, render::Audio>) {
          return "<audio controls preload=\"none\"" + attr("src", r.url) + "></audio> <a" +
                 attr("href", r.url) + ">" + html_escape(r.url) + "</a>";
        } else if constexpr (std::is_same_v<T, render::Video>) {
          auto ext = r.url.substr(r.url.find_last_of('.') + 1);
          if (ext == "mp4" || ext == "webm") {
            return "<video controls preload=\"none\" width=\"320\"" + attr("src", r.url) +
                   "></video>";
          }
          return "<a class=\"video\"" + attr("href", r.url) + ">" + html_escape(r.url) + "</a>";
        } else if constexpr (std::is_same_v<T, render::Image>) {
          return "<img" + attr("src", r.url) + attr("alt", "") + ">";
        } else if constexpr (std::is_same_v<T, GeoPoint>) {
          return format_number(r.lat) + ", " + format_number(r.lon);
        } else {
          return html_escape(r.text);
        }
      },
      cell->render);
}

std::string table_html(const TypedTable& t) {
  std::string out = "<table class=\"results\"><thead><tr>";
  for (const auto& v : t.vars) out += "<th>" + html_escape(v) + "</th>";
  out += "</tr></thead><tbody>";
  for (const auto& row : t.rows) {
    out += "<tr>";
    for (const auto& cell : row) out += "<td>" + cell_html(cell) + "</td>";
    out += "</tr>";
  }
  out += "</tbody></table>";
  if (t.rows.empty()) out += "<p class=\"empty\">No results.</p>";
  return out;
}

std::string map_svg(const GeoSet& geo, const std::vector<std::string>& palette,
                    const std::vector<std::string>& filter_vars) {
  constexpr double kW = 640, kH = 400, kPad = 20;
  double min_lat = 90, max_lat = -90, min_lon = 180, max_lon = -180;
  for (const auto& p : geo.points) {
    min_lat = std::min(min_lat, p.point.lat);
    max_lat = std::max(max_lat, p.point.lat);
    min_lon = std::min(min_lon, p.point.lon);
    max_lon = std::max(max_lon, p.point.lon);
  }
  if (geo.points.empty()) min_lat = max_lat = min_lon = max_lon = 0;
  double lat_span = std::max(max_lat - min_lat, 0.01);
  double mid_lat = (min_lat + max_lat) / 2;
  double lon_span = std::max((max_lon - min_lon) * std::cos(mid_lat * M_PI / 180), 0.01);
  double scale = std::min((kW - 2 * kPad) / lon_span, (kH - 2 * kPad) / lat_span);
  std::string fill = palette.empty() ? "#888888" : palette.front();

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" "
       "height=\"400\" viewBox=\"0 0 640 400\" class=\"geo\" role=\"img\">";
  s << "<rect class=\"backdrop\" x=\"0\" y=\"0\" width=\"640\" height=\"400\" "
       "fill=\"#eef3f7\"/>";
  for (const auto& p : geo.points) {
    double x = kPad + (p.point.lon - min_lon) * std::cos(mid_lat * M_PI / 180) * scale;
    double y = kH - kPad - (p.point.lat - min_lat) * scale;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    nlohmann::ordered_json facets = nlohmann::ordered_json::object();
    std::string name;
    for (const auto& [k, v] : p.metadata) {
      meta[k] = v;
      if (std::find(filter_vars.begin(), filter_vars.end(), k) != filter_vars.end())
        facets[k] = v;
      if (k == conventions::kMapName) name = v;
    }
    s << "<circle class=\"point\" cx=\"" << format_number(x) << "\" cy=\""
      << format_number(y) << "\" r=\"5\" fill=\"" << fill << "\""
      << attr("data-facets", facets.dump()) << attr("data-meta", meta.dump()) << "><title>"
      << html_escape(name.empty() ? format_number(p.point.lat) + ", " +
                                        format_number(p.point.lon)
                                  : name)
      << "</title></circle>";
  }
  s << "</svg>";
  return s.str();
}

std::string map_html(const GeoSet& geo, const block::Map& m,
                     const std::vector<std::string>& palette) {
  std::string out = "<div class=\"map\">";
  if (!geo.facets.empty()) {
    out += "<aside class=\"filters\">";
    for (const auto& [var, values] : geo.facets) {
      out += "<fieldset><legend>" + html_escape(var) + "</legend>";
      for (const auto& v : values) {
        out += "<label><input type=\"checkbox\" checked" + attr("data-facet", var) +
               attr("value", v) + "> " + html_escape(v) + "</label><br>";
      }
      out += "</fieldset>";
    }
    out += "</aside>";
  }
  out += "<figure>" + map_svg(geo, palette, m.filter_vars) + "<figcaption>" +
         std::to_string(geo.points.size()) + " points</figcaption></figure>";
  out += "<aside class=\"metadata\"><p>Select a point to see its details.</p></aside></div>";
  out += "<details class=\"points\"><summary>Point list</summary><table "
         "class=\"results\"><thead><tr><th>lat</th><th>long</th><th>details</th></tr>"
         "</thead><tbody>";
  for (const auto& p : geo.points) {
    out += "<tr><td>" + format_number(p.point.lat) + "</td><td>" +
           format_number(p.point.lon) + "</td><td>";
    for (std::size_t i = 0; i < p.metadata.size(); ++i) {
      if (i) out += "; ";
      out += html_escape(p.metadata[i].first) + ": " + html_escape(p.metadata[i].second);
    }
    out += "</td></tr>";
  }
  out += "</tbody></table></details>";
  return out;
}

const RenderPayload* payload_for(const Component& c, const PayloadMap& payloads,
                                 SnapshotPolicy policy) {
  if (!c.is_data() || policy.mode == SnapshotMode::Live) return nullptr;
  auto it = payloads.find(c.id);
  if (it == payloads.end()) {
    throw Error(ErrorCode::MissingPayload,
                "component '" + c.id + "' has not been evaluated; snapshot export needs "
                "results for every data component");
  }
  return &it->second;
}

template <typename T>
const T& expect(const RenderPayload& p, const Component& c) {
  const T* v = std::get_if<T>(&p);
  if (!v) {
    throw Error(ErrorCode::MissingPayload,
                "component '" + c.id + "' has a " + std::string(payload_type_name(p)) +
                    " payload that does not fit a " + std::string(to_string(c.type())));
  }
  return *v;
}

std::string component_html(const Story& story, const Component& c,
                           const PayloadMap& payloads, SnapshotPolicy policy) {
  const RenderPayload* payload = payload_for(c, payloads, policy);
  bool live = c.is_data() && policy.mode == SnapshotMode::Live;
  std::string open = "<section class=\"component component-" +
                     std::string(to_string(c.type())) + "\"" + attr("id", c.id) +
                     attr("data-type", to_string(c.type()));
  if (live || c.is_interactive()) open += attr("data-endpoint", story.endpoint);
  if (live) open += " data-live=\"true\"" + attr("data-query", c.query_text());

  std::string body;
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, block::Text>) {
          body = "<div class=\"curated\">" + sanitize_html(b.html) + "</div>";
        } else if constexpr (std::is_same_v<T, block::Counter>) {
          if (live) {
            open += attr("data-label", b.label);
            body = "<div class=\"results\"><p class=\"loading\">Loading...</p></div>";
          } else {
            const auto& card = expect<Card>(*payload, c);
            body = "<div class=\"card\"><span class=\"card-value\">" +
                   format_number(card.value) + "</span><span class=\"card-label\">" +
                   html_escape(card.label) + "</span></div>" + notes_block(card.notes);
          }
          body += query_block(b.query);
        } else if constexpr (std::is_same_v<T, block::Chart>) {
          body = "<h2>" + html_escape(b.title) + "</h2>";
          if (live) {
            body += "<div class=\"results\"><p class=\"loading\">Loading...</p></div>";
          } else {
            const auto& s = expect<Series>(*payload, c);
            if (s.values.empty()) {
              body += "<p class=\"empty\">No data.</p>";
            } else {
              body += "<figure>" + export_component_svg(s, b.kind, story.palette, b.title) +
                      "</figure>";
            }
            body += "<script type=\"application/json\" class=\"payload\">" +
                    script_safe_json(payload_json(*payload)) + "</script>" +
                    notes_block(s.notes);
          }
          body += query_block(b.query);
        } else if constexpr (std::is_same_v<T, block::Table>) {
          body = "<h2>" + html_escape(b.title) + "</h2>";
          if (live) {
            body += "<div class=\"results\"><p class=\"loading\">Loading...</p></div>";
          } else {
            const auto& t = expect<TypedTable>(*payload, c);
            body += "<div class=\"results\">" + table_html(t) + "</div>" + notes_block(t.notes);
          }
          body += query_block(b.query);
        } else if constexpr (std::is_same_v<T, block::Map>) {
          if (live) {
            body = "<div class=\"results\"><p class=\"loading\">Loading...</p></div>";
          } else {
            const auto& g = expect<GeoSet>(*payload, c);
            body = map_html(g, b, story.palette) + notes_block(g.notes);
          }
          body += query_block(b.query);
        } else if constexpr (std::is_same_v<T, block::TextSearch>) {
          open += attr("data-template", b.query_template);
          body = "<form class=\"search\"><input type=\"search\" name=\"q\" "
                 "placeholder=\"Search...\"> <button type=\"submit\">Search</button></form>"
                 "<div class=\"results\"></div>" +
                 query_block(b.query_template, "View query template");
        } else {
          open += attr("data-template", b.query_template) + attr("data-source", b.source) +
                  attr("data-column", b.column) + attr("data-label", b.label);
          body = "<h3>" + html_escape(b.label) + "</h3><div class=\"results\"><p "
                 "class=\"hint\">Use the \"" + html_escape(b.label) +
                 "\" buttons next to ?" + html_escape(b.column) +
                 " values above.</p></div>" +
                 query_block(b.query_template, "View query template");
        }
      },
      c.body);
  return open + ">" + body + "</section>\n";
}

bool needs_script(const std::vector<const Component*>& components, SnapshotPolicy policy) {
  return std::any_of(components.begin(), components.end(), [&](const Component* c) {
    return c->is_interactive() || c->type() == ComponentType::Map ||
           (c->is_data() && policy.mode == SnapshotMode::Live);
  });
}

std::string document(const Story& story, std::string_view page_title,
                     const std::vector<const Component*>& components,
                     const PayloadMap& payloads, SnapshotPolicy policy, bool with_header) {
  std::string out = "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
                    "<meta name=\"viewport\" content=\"width=device-width, initial-scale=1\">\n"
                    "<meta name=\"generator\"" +
                    attr("content", kUserAgent) + ">\n<title>" + html_escape(page_title) +
                    "</title>\n<style>" + std::string(kStyle) + "</style>\n</head>\n<body>\n";
  if (with_header) {
    out += "<header>\n<h1>" + html_escape(story.title) + "</h1>\n";
    if (story.subtitle) out += "<p class=\"subtitle\">" + html_escape(*story.subtitle) + "</p>\n";
    if (story.description)
      out += "<p class=\"description\">" + html_escape(*story.description) + "</p>\n";
    out += "<p class=\"endpoint\">Data source: <a" + attr("href", story.endpoint) + ">" +
           html_escape(story.endpoint) + "</a>" +
           (policy.mode == SnapshotMode::Snapshot ? " (snapshot)" : " (live)") + "</p>\n";
    out += "</header>\n";
  }
  out += "<main" + attr("data-story", story.id) + ">\n";
  for (const Component* c : components) out += component_html(story, *c, payloads, policy);
  out += "</main>\n";
  if (needs_script(components, policy)) {
    out += "<script>" + std::string(kScript) + "</script>\n";
  }
  out += "</body>\n</html>\n";
  return out;
}

}  // namespace

std::string render_story(const Story& story, const PayloadMap& payloads,
                         SnapshotPolicy policy) {
  std::vector<const Component*> all;
  for (const auto& c : story.components) all.push_back(&c);
  return document(story, story.title, all, payloads, policy, true);
}

std::string render_component_page(const Story& story, const Component& component,
                                  const PayloadMap& payloads, SnapshotPolicy policy) {
  std::vector<const Component*> one{&component};
  // actions need their source on the same page to be usable
  if (component.type() == ComponentType::Action) {
    one.clear();
    std::vector<const Component*> chain{&component};
    const Component* cur = &component;
    while (const auto* a = std::get_if<block::Action>(&cur->body)) {
      cur = story.find(a->source);
      if (!cur) break;
      chain.push_back(cur);
    }
    one.assign(chain.rbegin(), chain.rend());
  }
  return document(story, story.title + " - " + component.id, one, payloads, policy, false);
}

}  // namespace lodstory::html
