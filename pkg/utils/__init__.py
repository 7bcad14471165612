# Gramáticas, mapas de ventana, logging y helpers HTTP
