def get_data():
    return [
        {
            "label": "Mining",
            "items": [
                {
                    "type": "command",
                    "name": "mine",
                    "label": "Mine features",
                    "description": "Mine neighbors, paths and path patterns of the seeds and write the binary matrix",
                },
                {
                    "type": "command",
                    "name": "stats",
                    "label": "Full neighborhood",
                    "description": "Report how far the seeds reach with no bound on path length and class level",
                },
                {
                    "type": "command",
                    "name": "oracle",
                    "label": "Brute-force check",
                    "description": "Compare the miner with the brute-force reference on a small graph",
                },
            ],
        }
    ]
