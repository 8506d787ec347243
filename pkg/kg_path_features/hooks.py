app_name = "kg_path_features"
app_title = "KG Path Features"
app_publisher = "kg_path_features contributors"
app_description = "Mining of neighbors, paths and path patterns around seed vertices"
app_license = "mit"

# Steps of a mining run, in execution order. Each entry is resolved with
# importlib by the pipeline driver and called with the run context.
pipeline_stages = {
    "ingest": "kg_path_features.pipeline.stage_ingest",
    "canonicalize": "kg_path_features.pipeline.stage_canonicalize",
    "neighbors": "kg_path_features.pipeline.stage_neighbors",
    "paths": "kg_path_features.pipeline.stage_paths",
    "filter": "kg_path_features.pipeline.stage_filter",
    "emit": "kg_path_features.pipeline.stage_emit",
}
