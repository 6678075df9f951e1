import { Component } from "@angular/core";
import { NgFor } from "@angular/common";
import { Tile_9de96e57Component } from "./components/tile-9de96e57.component";

@Component({
  selector: "app-root",
  standalone: true,
  imports: [NgFor, Tile_9de96e57Component],
  templateUrl: "./app.component.html",
})
export class AppComponent {
  items_0 = [
    { link_2: "https://example.com/a", media_0: "a.png", text_1: "Title a", text_3: "More about a" },
    { link_2: "https://example.com/b", media_0: "b.png", text_1: "Title b", text_3: "More about b" },
    { link_2: "https://example.com/c", media_0: "c.png", text_1: "Title c", text_3: "More about c" },
  ];
}
